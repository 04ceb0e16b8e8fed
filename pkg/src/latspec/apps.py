"""Application spectra: the q_{k+m}||q_k alpha|| families and the
first-quadrant Mordell-Gruber spectrum with its Hall ray.

The first family turns into Perron functions by telescoping products of
1/(1 + alpha_i beta_{i+1}) and 1/(a_i + alpha_i + beta_i); the first-quadrant
constant has a three-branch formula (odd entry; even entry on either side of
the alpha = beta seam) whose partial-derivative quotient stays within
[4/5, 5/4] once the center entry is at least 40, which feeds the
nested-rectangle solver over F(4) x F(4) to certify the Hall ray.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .cfrac import INF, BiSeq, OneSidedSeq, eval_tail, tail_sequence
from .exact import (
    DomainError,
    ExactNum,
    ValidatedInterval,
    as_exact,
    exact_add,
    exact_cmp,
    exact_div,
    exact_mul,
    exact_sign,
    exact_sub,
    float_of,
    surd_make,
    to_interval,
)
from .hall import T1, T2, FunctionRecord, SolverWitness, f4_cantor, f4_member_from_desc, interval_solver
from .perron import PerronSpec, evaluate_P

HALL_RAY_START = surd_make(41, 1, 2, 4)  # f(t1, t1, 40) = (41 + sqrt2)/4 < 10.61


# ---------------------------------------------------------------------------
# application 1: q_{k+m} || q_k alpha || spectra
# ---------------------------------------------------------------------------


def app1_spec(m: int) -> PerronSpec:
    """Perron function of the q_{k+m}||q_k alpha|| spectrum.

    m >= 1: f = prod_i (n_i + beta_i) / (1 + alpha' beta) with the beta chain
    running forward from the beta argument and alpha' chained back from the
    alpha argument; m = 1 degenerates to 1/(1 + alpha beta).  m <= 0 uses the
    reciprocal-product identity (l = |m| + 1 integral parameters, limit 0).
    """
    if m >= 1:
        l = m - 1

        def ev_pos(alpha, beta, ints):
            prod = Fraction(1)
            bi = beta
            for n in ints:
                prod = prod * (n + bi)
                bi = 1 / (n + bi)
            al = alpha
            for n in reversed(ints):
                al = 1 / (n + al)
            return prod / (1 + al * beta)

        return PerronSpec(f"S_{m}", l, ev_pos, math.inf)

    l = -m + 1

    def ev_neg(alpha, beta, ints):
        k = len(ints)
        alphas = [None] * k
        alphas[k - 1] = alpha
        for i in range(k - 2, -1, -1):
            alphas[i] = 1 / (ints[i + 1] + alphas[i + 1])
        betas = [None] * k
        betas[0] = beta
        for i in range(1, k):
            betas[i] = 1 / (ints[i - 1] + betas[i - 1])
        num = Fraction(1)
        for i in range(k - 1):
            num = num * (1 + alphas[i] * betas[i + 1])
        den = Fraction(1)
        for i in range(k):
            den = den * (ints[i] + alphas[i] + betas[i])
        return num / den

    return PerronSpec(f"I_{m}", l, ev_neg, Fraction(0))


def app1_spectrum_periodic(m: int, seq: BiSeq, limit: str = "sup") -> ExactNum:
    """Exact sup/inf over one period of the application-1 Perron values."""
    if limit not in ("sup", "inf"):
        raise DomainError("limit must be 'sup' or 'inf'")
    if not seq.purely_periodic:
        raise DomainError("needs a purely periodic sequence")
    spec = app1_spec(m)
    best = None
    for k in range(seq.period_length()):
        v = evaluate_P(spec, seq, k)
        if best is None or (limit == "sup" and exact_cmp(v, best) > 0) or (
            limit == "inf" and exact_cmp(v, best) < 0
        ):
            best = v
    return best


# ---------------------------------------------------------------------------
# application 2: the first-quadrant Mordell constant
# ---------------------------------------------------------------------------


def app2_perron(alpha: ExactNum, beta: ExactNum, a: int) -> ExactNum:
    """Three-branch first-quadrant Perron value, exact.

    Odd a:              (a+2b+1)(a+2x+1) / (4(a+x+b));
    even a, x >= b:     (a+2b+2)(a+2x)   / (4(a+x+b));
    even a, x <= b:     (a+2b)(a+2x+2)   / (4(a+x+b));
    the two even branches agree on the seam x = b.
    """
    if a < 1:
        raise DomainError("entry must be >= 1")
    alpha, beta = as_exact(alpha), as_exact(beta)
    den = exact_mul(Fraction(4), exact_add(Fraction(a), exact_add(alpha, beta)))
    if a % 2 == 1:
        num = exact_mul(Fraction(a + 1) + 2 * beta, Fraction(a + 1) + 2 * alpha)
    elif exact_cmp(alpha, beta) >= 0:
        num = exact_mul(Fraction(a + 2) + 2 * beta, Fraction(a) + 2 * alpha)
    else:
        num = exact_mul(Fraction(a) + 2 * beta, Fraction(a + 2) + 2 * alpha)
    return exact_div(num, den)


def app2_perron_enclosure(alpha: ValidatedInterval, beta: ValidatedInterval, a: int) -> ValidatedInterval:
    """Interval version; hulls the two even branches across the seam."""
    alpha, beta = to_interval(alpha), to_interval(beta)
    den = 4 * (Fraction(a) + alpha + beta)
    if a % 2 == 1:
        return (Fraction(a + 1) + 2 * beta) * (Fraction(a + 1) + 2 * alpha) / den
    v1 = (Fraction(a + 2) + 2 * beta) * (Fraction(a) + 2 * alpha) / den
    if alpha.lo >= beta.hi:
        return v1
    v2 = (Fraction(a) + 2 * beta) * (Fraction(a + 2) + 2 * alpha) / den
    if beta.lo >= alpha.hi:
        return v2
    return v1.hull(v2)


def app2_spec() -> PerronSpec:
    """PerronSpec wrapper (arity 1, I = +inf); evaluated at even offsets."""
    return PerronSpec("first-quadrant", 1, lambda a, b, n: app2_perron(a, b, n[0]), math.inf)


def app2_kappa_plus(seq: BiSeq) -> ExactNum:
    """sup over even offsets of the first-quadrant Perron value (exact).

    Odd period lengths reach every residue through even offsets; even period
    lengths reach only the even residues.
    """
    if not seq.purely_periodic:
        raise DomainError("needs a purely periodic sequence")
    p = seq.period_length()
    spec = app2_spec()
    best = None
    for k in range(0, 2 * p, 2):
        v = evaluate_P(spec, seq, k)
        if best is None or exact_cmp(v, best) > 0:
            best = v
    return best


def app2_deriv_branches(a: int):
    """(f_alpha, f_beta) numerators per branch; the common 4(a+x+y)^2 factor
    cancels in the ratio.  Returns callables num_alpha(beta), num_beta(alpha)."""
    if a % 2 == 1:

        def na(beta):
            return (Fraction(a + 1) + 2 * beta) * (Fraction(a - 1) + 2 * beta)

        def nb(alpha):
            return (Fraction(a + 1) + 2 * alpha) * (Fraction(a - 1) + 2 * alpha)

        return [(na, nb)]

    def na_hi(beta):  # alpha >= beta branch
        return (Fraction(a + 2) + 2 * beta) * (Fraction(a) + 2 * beta)

    def nb_hi(alpha):
        return (Fraction(a - 2) + 2 * alpha) * (Fraction(a) + 2 * alpha)

    def na_lo(beta):  # alpha <= beta branch
        return (Fraction(a) + 2 * beta) * (Fraction(a - 2) + 2 * beta)

    def nb_lo(alpha):
        return (Fraction(a) + 2 * alpha) * (Fraction(a + 2) + 2 * alpha)

    return [(na_hi, nb_hi), (na_lo, nb_lo)]


def app2_record(a: int) -> FunctionRecord:
    """FunctionRecord of g(alpha, beta) = app2_perron(alpha, beta, a) for the
    solver; derivative and ratio bounds hull the branches touching the cell."""
    if a < 3:
        raise DomainError("strict monotonicity needs a >= 3")
    branches = app2_deriv_branches(a)

    def ev(x, y):
        return app2_perron(x, y, a)

    def db(xlo, xhi, ylo, yhi):
        dlo = exact_mul(Fraction(4), exact_mul(Fraction(a) + xlo + ylo, Fraction(a) + xlo + ylo))
        dhi = exact_mul(Fraction(4), exact_mul(Fraction(a) + xhi + yhi, Fraction(a) + xhi + yhi))
        alos, ahis, blos, bhis = [], [], [], []
        for na, nb in branches:
            alos.append(exact_div(na(ylo), dhi))
            ahis.append(exact_div(na(yhi), dlo))
            blos.append(exact_div(nb(xlo), dhi))
            bhis.append(exact_div(nb(xhi), dlo))
        return (_emin(alos), _emax(ahis)), (_emin(blos), _emax(bhis))

    def rb(xlo, xhi, ylo, yhi):
        los, his = [], []
        for na, nb in branches:
            los.append(exact_div(na(ylo), nb(xhi)))
            his.append(exact_div(na(yhi), nb(xlo)))
        return _emin(los), _emax(his)

    return FunctionRecord(f"first-quadrant[{a}]", ev, db, rb)


def _emin(vals):
    best = vals[0]
    for v in vals[1:]:
        if exact_cmp(v, best) < 0:
            best = v
    return best


def _emax(vals):
    best = vals[0]
    for v in vals[1:]:
        if exact_cmp(v, best) > 0:
            best = v
    return best


def app2_ratio_bracket(a: int, grid: int = 8) -> Tuple[ExactNum, ExactNum]:
    """Global bracket of f_alpha/f_beta over [0,1]^2 via a cell grid."""
    rec = app2_record(a)
    lo_all, hi_all = None, None
    for i in range(grid):
        for j in range(grid):
            lo, hi = rec.ratio_bounds(
                Fraction(i, grid), Fraction(i + 1, grid), Fraction(j, grid), Fraction(j + 1, grid)
            )
            lo_all = lo if lo_all is None or exact_cmp(lo, lo_all) < 0 else lo_all
            hi_all = hi if hi_all is None or exact_cmp(hi, hi_all) > 0 else hi_all
    return lo_all, hi_all


def app2_bracket_value(t: ExactNum, a: int) -> ExactNum:
    """f(t, t, a) on the diagonal: (a+2t+2)/4 for even a, else
    (a+2t+1)^2/(4(a+2t))."""
    t = as_exact(t)
    if a % 2 == 0:
        return exact_div(Fraction(a + 2) + 2 * t, Fraction(4))
    num = exact_mul(Fraction(a + 1) + 2 * t, Fraction(a + 1) + 2 * t)
    return exact_div(num, exact_mul(Fraction(4), Fraction(a) + 2 * t))


@dataclass
class HallRayWitness:
    sequence: BiSeq
    a0: Optional[int]  # None for the divergent (target = infinity) witness
    value: object  # exact value, or math.inf
    target: object
    residual_bound: ExactNum
    solver: Optional[SolverWitness]

    def as_json(self) -> dict:
        from .exact import exact_to_json

        return {
            "sequence": self.sequence.as_json(),
            "a0": self.a0,
            "value": "inf" if self.value == math.inf else exact_to_json(self.value),
            "target": "inf" if self.target == math.inf else exact_to_json(self.target),
            "residual": float_of(self.residual_bound),
        }


def divergent_ray_sequence(window: int = 25) -> BiSeq:
    """Finite window of the sequence a_{2n-1} = 1, a_{2n} = |n| + 1, whose
    first-quadrant constant is infinite."""
    right = []
    for i in range(2 * window):
        right.append(1 if i % 2 == 1 else i // 2 + 1)
    left = []
    for i in range(1, 2 * window):  # a_{-1}, a_{-2}, ...
        left.append(1 if i % 2 == 1 else i // 2 + 1)
    return BiSeq(right=OneSidedSeq(tuple(right), ()), left=OneSidedSeq(tuple(left), ()))


def app2_hall_ray_certify(target, tol, max_entry_sweep: int = 10**7) -> HallRayWitness:
    """Witness sequence whose first-quadrant constant is within tol of the
    target (>= f(t1,t1,40)); target = inf returns the explicit divergent
    sequence window.

    Finite targets: pick the smallest a0 >= 40 whose diagonal bracket
    [f(t1,t1,a0), f(t2,t2,a0)] contains the target (consecutive brackets
    overlap), then solve for the F(4) tail pair.
    """
    if target == math.inf:
        return HallRayWitness(
            sequence=divergent_ray_sequence(),
            a0=None,
            value=math.inf,
            target=math.inf,
            residual_bound=Fraction(0),
            solver=None,
        )
    target = as_exact(target)
    tol = as_exact(tol)
    if exact_cmp(target, HALL_RAY_START) < 0:
        raise DomainError("target below the certified ray start f(t1,t1,40)")
    a0 = 40
    while exact_cmp(app2_bracket_value(T2, a0), target) < 0:
        a0 += 1
        if a0 > max_entry_sweep:
            raise DomainError("target beyond the entry sweep limit")
    if exact_cmp(app2_bracket_value(T1, a0), target) > 0:
        raise AssertionError("bracket overlap violated")  # Claim-2 style overlap
    rec = app2_record(a0)
    cs = f4_cantor()
    wit = interval_solver(rec, cs, cs, target, tol)
    alpha_member = f4_member_from_desc(wit.x_node.lo_desc)
    beta_member = f4_member_from_desc(wit.y_node.lo_desc)
    seq = BiSeq(
        right=OneSidedSeq((a0,) + alpha_member.head, alpha_member.period),
        left=OneSidedSeq(beta_member.head, beta_member.period),
    )
    value = rec.evaluate(wit.x_node.lo, wit.y_node.lo)
    return HallRayWitness(
        sequence=seq,
        a0=a0,
        value=value,
        target=target,
        residual_bound=wit.residual_bound,
        solver=wit,
    )


def app2_kappa_plus_window(seq: BiSeq, window: int, depth: int) -> ValidatedInterval:
    """Independent enclosure of the first-quadrant constant over even offsets
    in a window, with truncated tails."""
    best: Optional[ValidatedInterval] = None
    for k in range(-window, window + 1):
        if k % 2 != 0 or not seq.defined(k):
            continue
        a = seq.term(k)
        if a == INF:
            continue
        alpha = to_interval(eval_tail(tail_sequence(seq, k, +1), depth))
        beta = to_interval(eval_tail(tail_sequence(seq, k, -1), depth))
        val = app2_perron_enclosure(alpha, beta, int(a))
        best = val if best is None else ValidatedInterval(max(best.lo, val.lo), max(best.hi, val.hi))
    if best is None:
        raise DomainError("no even offsets defined in the window")
    return best
