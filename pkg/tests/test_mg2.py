import random
from fractions import Fraction

import pytest

from latspec.cfrac import BiSeq
from latspec.exact import exact_cmp, exact_sub, exact_abs, float_of, surd_make
from latspec.mg2 import (
    CONSTANTS,
    classify_low_spectrum,
    hall_brackets,
    lower_part_table,
    lower_part_value,
    mg2_hall_certify,
    mordell_constant_periodic,
    mordell_constant_window,
    one_two_one_value,
    perron_gap_search,
)

MG_MIN = surd_make(5, 1, 5, 10)


def test_known_constants():
    assert CONSTANTS.mg2_min == MG_MIN
    assert CONSTANTS.mg2_accumulation == surd_make(1, 1, 5, 4)
    assert abs(float_of(CONSTANTS.hall_segment_lo) - 0.9645) < 1e-4
    assert abs(float_of(CONSTANTS.freiman_K0) - 4.5278) < 1e-4


def test_mordell_all_ones():
    got = mordell_constant_periodic(BiSeq.from_period([1]))
    assert got.value == MG_MIN


def test_mordell_21():
    assert mordell_constant_periodic(BiSeq.from_period([2, 1])).value == surd_make(3, 1, 3, 6)


def test_mordell_2111():
    got = mordell_constant_periodic(BiSeq.from_period([2, 1, 1, 1]))
    assert got.value == surd_make(4, 1, 6, 8)


def test_mordell_minimum_over_samples():
    rng = random.Random(42)
    for _ in range(30):
        period = [rng.randint(1, 6) for _ in range(rng.randint(1, 5))]
        val = mordell_constant_periodic(BiSeq.from_period(period)).value
        cmp = exact_cmp(val, MG_MIN)
        if all(a == 1 for a in period):
            assert cmp == 0
        else:
            assert cmp > 0


def test_one_two_one_value():
    assert one_two_one_value() == surd_make(1, 1, 5, 4)


def test_lower_part_table():
    rows = lower_part_table(3)
    assert rows[0].value == MG_MIN
    assert rows[1].value == surd_make(3, 1, 3, 6)
    assert rows[2].value == surd_make(4, 1, 6, 8)
    assert rows[-1].value == surd_make(1, 1, 5, 4)


def test_lower_part_monotone_below_accumulation():
    vals = [lower_part_value(t) for t in range(1, 13)]
    for a, b in zip(vals, vals[1:]):
        assert exact_cmp(a, b) < 0
    for v in vals:
        assert exact_cmp(v, CONSTANTS.mg2_accumulation) < 0


def test_fibonacci_identity_exact():
    for t in range(1, 13):
        period = (2,) + (1,) * (2 * t - 1)
        direct = mordell_constant_periodic(BiSeq.from_period(period)).value
        assert direct == lower_part_value(t)


def test_classification_small():
    rep = classify_low_spectrum(max_period=6, max_entry=3)
    assert rep.consistent
    periods_below = {p for p, _ in rep.below}
    assert (1,) in periods_below
    assert (1, 2) in periods_below           # (2,1) canonical rotation, k=1
    assert (1, 1, 1, 2) in periods_below     # k=3
    assert all(_k_odd_or_allones(p) for p in periods_below)


def _k_odd_or_allones(period):
    if all(a == 1 for a in period):
        return True
    return (len(period) - 1) % 2 == 1


def test_even_k_exceeds_accumulation():
    # (2,1,1): k=2 even -> kappa above (1+sqrt5)/4
    val = mordell_constant_periodic(BiSeq.from_period([2, 1, 1])).value
    assert exact_cmp(val, CONSTANTS.mg2_accumulation) > 0


def test_minimum_proof_tail_product_bound():
    # the tail product controlling the a0 = 2 branch of the minimum theorem:
    # [0;(1,2)] * [0;2,(2,1)] against 4/sqrt3 - 2; the two are exactly equal,
    # so the bound holds as <= (strictness comes from the strict tail
    # comparisons in the surrounding argument)
    from latspec.cfrac import eval_periodic
    from latspec.exact import exact_mul, exact_sub, surd_make

    prod = exact_mul(eval_periodic([], [1, 2]), eval_periodic([2], [2, 1]))
    bound = exact_sub(surd_make(0, 4, 3, 3), Fraction(2))  # 4/sqrt3 - 2
    assert exact_cmp(prod, bound) == 0
    golden_sq = exact_mul(surd_make(-1, 1, 5, 2), surd_make(-1, 1, 5, 2))
    assert exact_cmp(bound, golden_sq) < 0  # ... and stays below (phi-1)^2


def test_perron_gap_small():
    rep = perron_gap_search(max_period=4, max_entry=3)
    assert rep.empty_interior
    assert (1, 2) in rep.left_witnesses
    assert (3,) in rep.right_witnesses


def test_hall_bracket_schedule_overlaps():
    brs = []
    gen = hall_brackets(12)
    for br in gen:
        brs.append(br)
        if len(brs) > 12:
            break
    for prev, nxt in zip(brs, brs[1:]):
        assert exact_cmp(nxt.lo, prev.hi) <= 0
    assert exact_cmp(brs[0].lo, CONSTANTS.hall_segment_lo) == 0


def test_hall_certify_near_left_end():
    target = CONSTANTS.hall_segment_lo + Fraction(1, 10**6)
    wit = mg2_hall_certify(target, Fraction(1, 10**10))
    assert wit.a0 == 5 and wit.am1 == 5
    assert float_of(exact_abs(exact_sub(wit.value, target))) <= 1e-10
    # the witness sequence has the required shape
    assert wit.sequence.term(0) == 5 and wit.sequence.term(-1) == 5
    for i in list(range(1, 12)) + list(range(-12, -1)):
        assert 1 <= wit.sequence.term(i) <= 4


def test_hall_certify_097():
    wit = mg2_hall_certify(Fraction(97, 100), Fraction(1, 10**10))
    assert float_of(exact_abs(exact_sub(wit.value, Fraction(97, 100)))) <= 1e-10


def test_hall_certify_cross_validated():
    rng = random.Random(5150)
    for _ in range(4):
        target = Fraction(9650 + rng.randint(0, 330), 10**4)
        wit = mg2_hall_certify(target, Fraction(1, 10**9))
        window = len(wit.sequence.right.head) + len(wit.sequence.left.head) + 4
        enc = mordell_constant_window(wit.sequence, window, depth=80)
        mid = enc.midpoint()
        assert abs(float_of(mid) - float_of(target)) <= 1e-9 + 2.0**-60


def test_hall_certify_rejects_outside():
    with pytest.raises(Exception):
        mg2_hall_certify(Fraction(9, 10), Fraction(1, 10**9))
    with pytest.raises(Exception):
        mg2_hall_certify(Fraction(1), Fraction(1, 10**9))
