import random
from fractions import Fraction

import pytest

from latspec.cfrac import eval_periodic
from latspec.exact import exact_cmp, exact_div, exact_mul, exact_sub, float_of, surd_make
from latspec.hall import (
    T1,
    T2,
    CertificationRefused,
    F4_APERTURE_BOUND,
    FunctionRecord,
    SubtreeCantor,
    aperture_ratio,
    certify_hall_interval,
    f4_cantor,
    f4_member_from_desc,
    interval_solver,
    membership_depth,
    split_ratios,
    sum_record,
    ternary_cantor,
)


def test_f4_extremes():
    assert T1 == eval_periodic([], [4, 1])
    assert T2 == eval_periodic([], [1, 4])
    assert T1 == surd_make(-1, 1, 2, 2)
    assert T2 == surd_make(-2, 2, 2, 1)


def test_ternary_aperture_exact_one():
    assert aperture_ratio(ternary_cantor(), 20) == Fraction(1)


def test_quarters_ratio():
    # split into [0, 1/4] and [3/4, 1]: gap / piece = 2
    from latspec.hall import CantorNode

    left = CantorNode(Fraction(0), Fraction(1, 4), 1)
    right = CantorNode(Fraction(3, 4), Fraction(1), 1)
    assert split_ratios(left, right) == Fraction(2)


def test_f4_aperture_depth12_below_bound():
    sup = aperture_ratio(f4_cantor(), 12)
    assert exact_cmp(sup, F4_APERTURE_BOUND) <= 0
    assert exact_cmp(sup, Fraction(7687, 10000)) < 0


def test_f4_root_and_first_split():
    cs = f4_cantor()
    root = cs.root()
    assert root.lo == T1 and root.hi == T2
    left, right = cs.split(root)
    # the first-term-1 cylinder peels off above the {2,3,4} hull
    assert left.payload == ("grp", (), (2, 3, 4))
    assert right.payload == ("cyl", (1,))
    assert exact_cmp(left.hi, right.lo) < 0
    assert left.lo == T1
    assert left.hi == eval_periodic([2], [4, 1])
    assert right.lo == eval_periodic([1], [1, 4])
    assert right.hi == eval_periodic([1], [4, 1])
    # the root 3|4 stage attains Hall's bound exactly
    g34 = cs.split(cs.split(left)[0])
    assert split_ratios(*g34) == F4_APERTURE_BOUND


def test_f4_member_descriptions_evaluate_to_endpoints():
    cs = f4_cantor()
    node = cs.root()
    rng = random.Random(8)
    for _ in range(9):
        node = cs.split(node)[rng.randint(0, 1)]
        for val, desc in ((node.lo, node.lo_desc), (node.hi, node.hi_desc)):
            member = f4_member_from_desc(desc)
            assert eval_periodic(member.head, member.period) == val
            assert all(1 <= t <= 4 for t in member.head + member.period)


def test_membership_walk():
    cs = ternary_cantor()
    # 1/4 = 0.020202... in base 3 is a member
    assert membership_depth(cs, Fraction(1, 4), Fraction(1, 4), 25) == 25
    # 1/2 lies in the first removed gap
    assert membership_depth(cs, Fraction(1, 2), Fraction(1, 2), 25) == 0


def test_solver_ternary_sum_simple():
    w = interval_solver(sum_record(), ternary_cantor(), ternary_cantor(), Fraction(1), Fraction(1, 10**9), min_level=30)
    assert float_of(w.residual_bound) <= 1e-9
    assert w.x_node.level >= 30 and w.y_node.level >= 30
    s = w.alpha + w.beta
    assert abs(float_of(s) - 1) <= 1e-9


def test_solver_corner_values():
    w = interval_solver(sum_record(), ternary_cantor(), ternary_cantor(), Fraction(0), Fraction(1, 2**40))
    assert w.alpha == Fraction(0) and w.beta == Fraction(0)
    with pytest.raises(Exception):
        interval_solver(sum_record(), ternary_cantor(), ternary_cantor(), Fraction(3), Fraction(1, 100))


def test_solver_refuses_skewed_gradient():
    rec = FunctionRecord(
        "skew",
        lambda x, y: x + 10 * y,
        lambda *cell: ((Fraction(1), Fraction(1)), (Fraction(10), Fraction(10))),
    )
    with pytest.raises(CertificationRefused):
        interval_solver(rec, ternary_cantor(), ternary_cantor(), Fraction(5), Fraction(1, 100))


def test_solver_witness_membership_and_progress():
    rng = random.Random(12345)
    for _ in range(25):
        h = Fraction(rng.getrandbits(40), 2**40) * 2
        w = interval_solver(sum_record(), ternary_cantor(), ternary_cantor(), h, Fraction(1, 10**9), min_level=30)
        assert float_of(w.residual_bound) <= 1e-9
        assert membership_depth(ternary_cantor(), w.x_node.lo, w.x_node.hi, 30) == 30
        assert membership_depth(ternary_cantor(), w.y_node.lo, w.y_node.hi, 30) == 30
        # descent progress: area strictly decreases at every audited step
        assert len(w.steps) >= 30
        areas = [s.area for s in w.steps]
        assert all(b < a for a, b in zip(areas, areas[1:]))


def test_certify_ternary_sum_interval():
    rep = certify_hall_interval(sum_record(), ternary_cantor(), ternary_cantor(), grid=8, tol=Fraction(1, 10**9))
    assert rep.h_lo == Fraction(0) and rep.h_hi == Fraction(2)
    assert len(rep.witnesses) == 9
    for w in rep.witnesses:
        assert float_of(w.residual_bound) <= 1e-9
    js = rep.as_json()
    assert js["ratio_bracket"] == [1.0, 1.0]


def mg2_bracket_record(a0: int, am1: int) -> FunctionRecord:
    """K(alpha, beta) = 1/(1 + 1/((a0+alpha)(am1+beta))), increasing in both.

    dK/dalpha = (am1+beta)/(v+1)^2 and dK/dbeta = (a0+alpha)/(v+1)^2 with
    v = (a0+alpha)(am1+beta); monotone bounds over a cell are the corner
    evaluations.
    """

    def ev(x, y):
        v = (Fraction(a0) + x) * (Fraction(am1) + y)
        return exact_div(v, v + 1)

    def db(xlo, xhi, ylo, yhi):
        vlo = (Fraction(a0) + xlo) * (Fraction(am1) + ylo)
        vhi = (Fraction(a0) + xhi) * (Fraction(am1) + yhi)
        da = (
            exact_div(Fraction(am1) + ylo, exact_mul(vhi + 1, vhi + 1)),
            exact_div(Fraction(am1) + yhi, exact_mul(vlo + 1, vlo + 1)),
        )
        db_ = (
            exact_div(Fraction(a0) + xlo, exact_mul(vhi + 1, vhi + 1)),
            exact_div(Fraction(a0) + xhi, exact_mul(vlo + 1, vlo + 1)),
        )
        return da, db_

    def rb(xlo, xhi, ylo, yhi):
        # the (v+1)^2 factors cancel: ratio = (am1+beta)/(a0+alpha)
        return (
            exact_div(Fraction(am1) + ylo, Fraction(a0) + xhi),
            exact_div(Fraction(am1) + yhi, Fraction(a0) + xlo),
        )

    return FunctionRecord(f"mg2[{a0},{am1}]", ev, db, rb)


def test_solver_on_f4_mordell_bracket():
    rec = mg2_bracket_record(5, 5)
    cs = f4_cantor()
    lo = rec.evaluate(T1, T1)
    hi = rec.evaluate(T2, T2)
    # (83+18sqrt2)/(87+18sqrt2) is the left endpoint
    seg_lo = exact_div(surd_make(83, 18, 2, 1), surd_make(87, 18, 2, 1))
    assert exact_cmp(lo, seg_lo) == 0
    h = exact_div(lo + hi, Fraction(2))
    w = interval_solver(rec, cs, cs, h, Fraction(1, 10**10))
    assert float_of(w.residual_bound) <= 1e-10
    assert membership_depth(cs, w.x_node.lo, w.x_node.hi, w.x_node.level) == w.x_node.level


def test_subtree_cantor_restriction():
    cs = f4_cantor()
    right = cs.split(cs.root())[1]
    sub = SubtreeCantor(cs, right)
    assert sub.root() == right
    assert exact_cmp(aperture_ratio(sub, 8), F4_APERTURE_BOUND) <= 0
