from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latspec.cfrac import (
    INF,
    BiSeq,
    InvalidTermError,
    OneSidedSeq,
    compare_cf,
    convergents,
    eval_finite,
    eval_periodic,
    eval_tail,
    mobius_apply,
    tail_sequence,
    tails_at,
    truncation_interval,
)
from latspec.exact import exact_cmp, surd_make, to_interval

GOLDEN_TAIL = surd_make(-1, 1, 5, 2)  # [0; 1,1,1,...] = (sqrt5-1)/2


def test_eval_finite_basics():
    assert eval_finite([2]) == Fraction(1, 2)
    assert eval_finite([1, 2, 3]) == Fraction(7, 10)
    assert eval_finite([]) == Fraction(0)


def test_eval_finite_rejects_bad_terms():
    with pytest.raises(InvalidTermError):
        eval_finite([1, 0, 2])


def test_eval_periodic_golden():
    assert eval_periodic([], [1]) == GOLDEN_TAIL


def test_eval_periodic_sqrt2():
    assert eval_periodic([], [2]) == surd_make(-1, 1, 2, 1)


def test_eval_periodic_12():
    assert eval_periodic([], [1, 2]) == surd_make(-1, 1, 3, 1)


def test_convergents_golden():
    seq = OneSidedSeq((), (1,))
    assert convergents(seq, 4) == [Fraction(1), Fraction(1, 2), Fraction(2, 3), Fraction(3, 5)]


def test_convergents_twos():
    seq = OneSidedSeq((), (2,))
    assert convergents(seq, 3) == [Fraction(1, 2), Fraction(2, 5), Fraction(5, 12)]


def test_convergents_denominators_increase():
    seq = OneSidedSeq((3, 1, 4, 1, 5), ())
    qs = [c.denominator for c in convergents(seq, 5)]
    assert all(q2 > q1 for q1, q2 in zip(qs[1:], qs[2:]))


def test_compare_cf_first_term():
    a = OneSidedSeq((), (1,))
    b = OneSidedSeq((), (2,))
    assert compare_cf(a, b) == 1  # 0.618 > 0.414
    assert compare_cf(b, a) == -1


def test_compare_cf_equal():
    a = OneSidedSeq((1, 2), (3, 4))
    assert compare_cf(a, a) == 0


def test_compare_cf_prefix_convention():
    # [0;2] = 1/2 vs [0;2,3] = 3/7: the shorter one is larger
    a = OneSidedSeq((2,), ())
    b = OneSidedSeq((2, 3), ())
    assert compare_cf(a, b) == 1


def test_truncation_interval_depth0():
    seq = OneSidedSeq((), (1,))
    iv = truncation_interval(seq, 0)
    assert iv.lo == 0 and iv.hi == 1


def test_truncation_interval_golden_depth3():
    seq = OneSidedSeq((), (1,))
    iv = truncation_interval(seq, 3)
    assert (iv.lo, iv.hi) == (Fraction(3, 5), Fraction(2, 3))
    assert iv.width == Fraction(1, 15) <= Fraction(1, 8)


def test_truncation_interval_depth1():
    seq = OneSidedSeq((2, 7, 1), ())
    iv = truncation_interval(seq, 1)
    assert (iv.lo, iv.hi) == (Fraction(1, 3), Fraction(1, 2))


def test_tails_all_ones():
    seq = BiSeq.from_period([1])
    for k in (-3, 0, 5):
        pair = tails_at(seq, k)
        assert pair.alpha == GOLDEN_TAIL
        assert pair.beta == GOLDEN_TAIL


def test_tails_alternating():
    # bi-infinite ...,1,2,1,2,... with a0 = 2
    seq = BiSeq.from_period([2, 1])
    pair = tails_at(seq, 0)
    assert pair.beta == surd_make(-1, 1, 3, 1)          # [0;1,2,1,2,...] = sqrt3-1
    minus1 = tails_at(seq, -1)
    assert minus1.alpha == surd_make(-1, 1, 3, 2)       # [0;2,1,2,...] = (sqrt3-1)/2


def test_tail_beginning_with_infinity_is_zero():
    seq = BiSeq.from_one_sided(OneSidedSeq((), (1,)))
    pair = tails_at(seq, 0)
    assert pair.beta == Fraction(0)
    assert pair.alpha == GOLDEN_TAIL


def test_tails_periodic_shift_invariance():
    seq = BiSeq.from_period([1, 2, 3])
    a = tails_at(seq, 1)
    b = tails_at(seq, 1 + 3)
    assert a.alpha == b.alpha and a.beta == b.beta


def test_shift_reindexes():
    seq = BiSeq.from_period([1, 2, 3])
    shifted = seq.shift(2)
    for i in range(-5, 5):
        assert shifted.term(i) == seq.term(i + 2)


def test_forced_truncation_tail_eval():
    seq = OneSidedSeq((), (1,))
    iv = eval_tail(seq, depth=20)
    assert iv.contains(to_interval(GOLDEN_TAIL, 64).midpoint())
    assert iv.width <= Fraction(1, 2**20)


def test_json_round_trip():
    s = OneSidedSeq((1, 2), (3,))
    assert OneSidedSeq.from_json(s.as_json()) == s
    f = OneSidedSeq((4, 5), (), True)
    assert OneSidedSeq.from_json(f.as_json()) == f
    b = BiSeq.from_period([2, 1])
    assert BiSeq.from_json(b.as_json()) == b


def test_purely_periodic_recognition():
    assert BiSeq.from_period([2, 1, 1]).purely_periodic
    assert not BiSeq.from_one_sided(OneSidedSeq((), (1,))).purely_periodic


terms = st.integers(1, 9)


@given(st.lists(terms, min_size=1, max_size=6), st.lists(terms, min_size=1, max_size=4))
@settings(max_examples=150)
def test_eval_periodic_satisfies_mobius_equation(pre, per):
    x = eval_periodic([], per)
    assert mobius_apply(per, x) == x
    y = eval_periodic(pre, per)
    assert mobius_apply(pre, x) == y


@given(st.lists(terms, min_size=1, max_size=8))
@settings(max_examples=150)
def test_nested_truncation(terms_list):
    seq = OneSidedSeq((), tuple(terms_list))
    prev = truncation_interval(seq, 0)
    for n in range(1, 12):
        cur = truncation_interval(seq, n)
        assert prev.contains(cur)
        assert cur.width <= Fraction(1, 2**n)
        if n >= 2:
            assert cur.width <= truncation_interval(seq, n - 2).width / 4
        prev = cur


def _random_onesided(draw_terms, periodic):
    if periodic:
        return OneSidedSeq((), tuple(draw_terms))
    # canonical finite form: last term >= 2 keeps value order == sequence order
    tl = list(draw_terms)
    if tl[-1] == 1:
        tl[-1] = 2
    return OneSidedSeq(tuple(tl), ())


@given(
    st.lists(terms, min_size=1, max_size=5),
    st.lists(terms, min_size=1, max_size=5),
    st.booleans(),
    st.booleans(),
)
@settings(max_examples=1000, deadline=None)
def test_compare_cf_agrees_with_enclosures(t1, t2, p1, p2):
    s = _random_onesided(t1, p1)
    t = _random_onesided(t2, p2)
    got = compare_cf(s, t)
    a = eval_tail(s)
    b = eval_tail(t)
    assert got == exact_cmp(a, b)


@given(st.lists(terms, min_size=1, max_size=6), st.integers(-6, 6))
@settings(max_examples=100)
def test_tail_sequences_consistent_with_terms(per, k):
    seq = BiSeq.from_period(per)
    right = tail_sequence(seq, k, +1)
    left = tail_sequence(seq, k, -1)
    for i in range(8):
        assert right.term(i) == seq.term(k + 1 + i)
        assert left.term(i) == seq.term(k - 1 - i)
