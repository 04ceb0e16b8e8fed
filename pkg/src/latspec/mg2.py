"""Mordell-Gruber spectrum machinery: exact Mordell constants of periodic
sequences, the Fibonacci lower part and its classification, the Markov gap
scan, and the constructive Hall-segment certification.

The Hall certification realizes targets kappa in the segment
[(83+18 sqrt2)/(87+18 sqrt2), 1) by sequences with two large neighboring
entries a_{-1}, a_0 >= 5 and all other entries <= 4; the two tails are found
by the nested-rectangle solver over the F(4) Cantor set, and the winning
cell corner gives an eventually periodic witness whose Mordell constant is
exactly computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .cfrac import BiSeq, OneSidedSeq, eval_tail, tail_sequence
from .exact import (
    DomainError,
    ExactNum,
    ValidatedInterval,
    as_exact,
    exact_add,
    exact_cmp,
    exact_div,
    exact_mul,
    exact_sqrt,
    exact_sub,
    float_of,
    surd_make,
    to_interval,
)
from .hall import (
    T1,
    T2,
    CantorSet,
    F4Cantor,
    FunctionRecord,
    SolverWitness,
    SubtreeCantor,
    f4_cantor,
    f4_member_from_desc,
    interval_solver,
)
from .systole import spectrum_value_periodic


@dataclass(frozen=True)
class KnownConstants:
    mg2_min: ExactNum = surd_make(5, 1, 5, 10)                 # (5+sqrt5)/10
    mg2_accumulation: ExactNum = surd_make(1, 1, 5, 4)         # (1+sqrt5)/4
    hall_segment_lo: ExactNum = exact_div(surd_make(83, 18, 2, 1), surd_make(87, 18, 2, 1))
    dirichlet_hall_lo: ExactNum = exact_div(surd_make(83, 18, 2, 1), surd_make(87, 18, 2, 1))
    freiman_K0: ExactNum = surd_make(2221564096, 283748, 462, 491993569)
    perron_gap: Tuple[ExactNum, ExactNum] = (surd_make(0, 2, 3, 1), surd_make(0, 1, 13, 1))


CONSTANTS = KnownConstants()


def mordell_constant_periodic(seq: BiSeq):
    """Exact sup over one period of 1/(1 + beta_j alpha_{j-1})."""
    return spectrum_value_periodic(seq, "MG2")


def mordell_constant_window(seq: BiSeq, window: int, depth: int) -> ValidatedInterval:
    """Independent enclosure of the Mordell constant over a window of offsets
    with truncated tails; never reuses the exact periodic solver."""
    best: Optional[ValidatedInterval] = None
    for j in range(-window, window + 1):
        if not seq.defined(j):
            continue
        beta = eval_tail(tail_sequence(seq, j, -1), depth)
        alpha = eval_tail(tail_sequence(seq, j - 1, +1), depth)
        val = 1 / (1 + to_interval(beta) * to_interval(alpha))
        if best is None:
            best = val
        else:
            best = ValidatedInterval(max(best.lo, val.lo), max(best.hi, val.hi))
    if best is None:
        raise DomainError("no defined offsets in the window")
    return best


# ---------------------------------------------------------------------------
# the lower part
# ---------------------------------------------------------------------------


def fibonacci(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class SpectrumTableRow:
    label: str
    period: Optional[tuple]
    value: ExactNum

    @property
    def decimal(self) -> float:
        return float_of(self.value)

    def as_csv(self) -> tuple:
        from .exact import format_exact

        return (self.label, format_exact(self.value), f"{self.decimal:.12f}")


def lower_part_value(t: int) -> ExactNum:
    """Closed form (1 + sqrt(F_{2t}/F_{2t+2})) / 2."""
    if t < 1:
        raise DomainError("t must be >= 1")
    s = exact_sqrt(Fraction(fibonacci(2 * t), fibonacci(2 * t + 2)))
    return exact_div(exact_add(Fraction(1), s), Fraction(2))


def one_two_one_sequence() -> BiSeq:
    """The bi-infinite sequence (..., 1, 1, 2, 1, 1, ...) with the 2 at 0."""
    return BiSeq(right=OneSidedSeq((2,), (1,)), left=OneSidedSeq((), (1,)))


def one_two_one_value() -> ExactNum:
    """Mordell constant of (1bar, 2, 1bar) via exact eventually-periodic tails."""
    seq = one_two_one_sequence()
    best = None
    for j in range(-4, 5):
        beta = eval_tail(tail_sequence(seq, j, -1))
        alpha = eval_tail(tail_sequence(seq, j - 1, +1))
        val = exact_div(Fraction(1), exact_add(Fraction(1), exact_mul(beta, alpha)))
        if best is None or exact_cmp(val, best) > 0:
            best = val
    return best


def lower_part_table(t_max: int) -> List[SpectrumTableRow]:
    """Rows of the lower part: the Fibonacci family, cross-checked against
    direct periodic evaluation, plus the isolated accumulation value."""
    if t_max < 1:
        raise DomainError("t_max must be >= 1")
    rows = [SpectrumTableRow("(1bar)", (1,), CONSTANTS.mg2_min)]
    for t in range(1, t_max + 1):
        period = (2,) + (1,) * (2 * t - 1)
        closed = lower_part_value(t)
        direct = mordell_constant_periodic(BiSeq.from_period(period)).value
        if exact_cmp(closed, direct) != 0:
            raise AssertionError(f"closed form and direct evaluation disagree at t={t}")
        rows.append(SpectrumTableRow(f"(2,1^({2 * t - 1}))bar", period, closed))
    rows.append(SpectrumTableRow("(1bar,2,1bar) [accumulation]", None, one_two_one_value()))
    return rows


@dataclass
class ClassificationReport:
    checked: int
    below: List[Tuple[tuple, ExactNum]]  # periods with value <= (1+sqrt5)/4
    violations: List[tuple]
    consistent: bool


def _canonical_rotation(t: tuple) -> tuple:
    return min(t[i:] + t[:i] for i in range(len(t)))


def _primitive(t: tuple) -> bool:
    n = len(t)
    return not any(n % d == 0 and t == t[:d] * (n // d) for d in range(1, n))


def _in_low_family(period: tuple) -> bool:
    """all-1, or a rotation of (2, 1^(k)) with k odd."""
    if all(a == 1 for a in period):
        return True
    canon = _canonical_rotation(period)
    k = len(period) - 1
    return canon == (1,) * k + (2,) and k % 2 == 1


def classify_low_spectrum(max_period: int, max_entry: int) -> ClassificationReport:
    """Verify the lower-part classification by exhaustive exact enumeration:
    a periodic Mordell constant is <= (1+sqrt5)/4 exactly for the all-1
    sequence and the odd members of the (2, 1^(k)) family."""
    import itertools

    threshold = CONSTANTS.mg2_accumulation
    below, violations = [], []
    checked = 0
    for p in range(1, max_period + 1):
        for period in itertools.product(range(1, max_entry + 1), repeat=p):
            if period != _canonical_rotation(period) or not _primitive(period):
                continue
            checked += 1
            val = mordell_constant_periodic(BiSeq.from_period(period)).value
            is_below = exact_cmp(val, threshold) <= 0
            in_family = _in_low_family(period)
            if is_below:
                below.append((period, val))
            if is_below != in_family:
                violations.append(period)
    return ClassificationReport(checked=checked, below=below, violations=violations, consistent=not violations)


@dataclass
class GapReport:
    checked: int
    inside: List[Tuple[tuple, ExactNum]]
    left_witnesses: List[tuple]   # Markov value exactly sqrt 12
    right_witnesses: List[tuple]  # Markov value exactly sqrt 13
    empty_interior: bool


def perron_gap_search(max_period: int, max_entry: int) -> GapReport:
    """Enumerate Markov values of periodic sequences and verify none lies
    strictly inside (sqrt 12, sqrt 13)."""
    import itertools

    lo, hi = CONSTANTS.perron_gap
    inside, left_w, right_w = [], [], []
    checked = 0
    for p in range(1, max_period + 1):
        for period in itertools.product(range(1, max_entry + 1), repeat=p):
            if period != _canonical_rotation(period) or not _primitive(period):
                continue
            checked += 1
            value = spectrum_value_periodic(BiSeq.from_period(period), "Markov").value
            cl, ch = exact_cmp(value, lo), exact_cmp(value, hi)
            if cl > 0 and ch < 0:
                inside.append((period, value))
            if cl == 0:
                left_w.append(period)
            if ch == 0:
                right_w.append(period)
    return GapReport(
        checked=checked,
        inside=inside,
        left_witnesses=left_w,
        right_witnesses=right_w,
        empty_interior=not inside,
    )


# ---------------------------------------------------------------------------
# Hall segment certification
# ---------------------------------------------------------------------------


def kappa_record(a0: int, am1: int) -> FunctionRecord:
    """K(alpha, beta) = v/(v+1) with v = (a0+alpha)(am1+beta): the Mordell
    constant of a sequence with neighbors a0, am1 at the origin and tails
    alpha (right), beta (left); increasing in both tails."""

    def ev(x, y):
        v = (Fraction(a0) + x) * (Fraction(am1) + y)
        return exact_div(v, exact_add(v, Fraction(1)))

    def db(xlo, xhi, ylo, yhi):
        vlo = (Fraction(a0) + xlo) * (Fraction(am1) + ylo)
        vhi = (Fraction(a0) + xhi) * (Fraction(am1) + yhi)
        d_lo = exact_mul(exact_add(vhi, Fraction(1)), exact_add(vhi, Fraction(1)))
        d_hi = exact_mul(exact_add(vlo, Fraction(1)), exact_add(vlo, Fraction(1)))
        da = (exact_div(Fraction(am1) + ylo, d_lo), exact_div(Fraction(am1) + yhi, d_hi))
        db_ = (exact_div(Fraction(a0) + xlo, d_lo), exact_div(Fraction(a0) + xhi, d_hi))
        return da, db_

    def rb(xlo, xhi, ylo, yhi):
        # (v+1)^2 cancels in the quotient: ratio = (am1+beta)/(a0+alpha)
        return (
            exact_div(Fraction(am1) + ylo, Fraction(a0) + xhi),
            exact_div(Fraction(am1) + yhi, Fraction(a0) + xlo),
        )

    return FunctionRecord(f"kappa[{a0},{am1}]", ev, db, rb)


@dataclass(frozen=True)
class HallBracket:
    a0: int
    am1: int
    C: CantorSet
    D: CantorSet
    lo: ExactNum
    hi: ExactNum


def _bracket(a0: int, am1: int, C: CantorSet, D: CantorSet) -> HallBracket:
    rec = kappa_record(a0, am1)
    return HallBracket(a0, am1, C, D, rec.evaluate(C.root().lo, D.root().lo), rec.evaluate(C.root().hi, D.root().hi))


def hall_brackets(limit: int = 64):
    """Covering schedule of kappa brackets: (a,a) and (a,a+1) pairs.

    The full-square pair (5,6) fails the normalized derivative-ratio
    condition marginally ((6+t2)/(5+t1) exceeds 1/Ap), so the 5-to-6 bridge
    uses three (5,6) brackets over the two depth-1 pieces of F(4) -- the
    {2,3,4}-hull A and the 1-cylinder B, whose widths are comparable:
    (A,A), (A,B) and (B,B) keep the scaled ratio inside [Ap, 1/Ap] and their
    kappa ranges chain across the gap.  From a = 6 on the full squares
    overlap directly.
    """
    f4 = f4_cantor()
    lo_piece, hi_piece = f4.split(f4.root())
    A = SubtreeCantor(f4, lo_piece)
    B = SubtreeCantor(f4, hi_piece)
    for a in range(5, limit + 1):
        yield _bracket(a, a, f4, f4)
        if a == 5:
            yield _bracket(5, 6, A, A)
            yield _bracket(5, 6, A, B)
            yield _bracket(5, 6, B, B)
        else:
            yield _bracket(a, a + 1, f4, f4)


@dataclass
class HallWitness:
    sequence: BiSeq
    a0: int
    am1: int
    value: ExactNum  # exact Mordell constant of the witness
    target: ExactNum
    residual_bound: ExactNum
    solver: SolverWitness

    def as_json(self) -> dict:
        from .exact import exact_to_json

        return {
            "sequence": self.sequence.as_json(),
            "a0": self.a0,
            "a_minus_1": self.am1,
            "value": exact_to_json(self.value),
            "target": exact_to_json(self.target),
            "residual": float_of(self.residual_bound),
        }


def mg2_hall_certify(target, tol, max_entry_sweep: int = 4096) -> HallWitness:
    """Witness sequence whose Mordell constant is within tol of the target.

    Sequences have a_{-1} = am1, a_0 = a0 (both >= 5) and all other entries
    in {1,...,4}; on that family the supremum defining the Mordell constant
    is attained at the origin, so kappa = K(alpha_0, beta_{-1}) and the tail
    pair is produced by the nested-rectangle solver over F(4) x F(4).
    """
    target = as_exact(target)
    tol = as_exact(tol)
    if exact_cmp(target, CONSTANTS.hall_segment_lo) < 0 or exact_cmp(target, Fraction(1)) >= 0:
        raise DomainError("target outside the certified Hall segment")
    chosen = None
    prev_hi = None
    for br in hall_brackets(max_entry_sweep):
        if prev_hi is not None and exact_cmp(br.lo, prev_hi) > 0:
            raise AssertionError("bracket schedule left a gap")
        prev_hi = br.hi if prev_hi is None or exact_cmp(br.hi, prev_hi) > 0 else prev_hi
        if exact_cmp(br.lo, target) <= 0 and exact_cmp(target, br.hi) <= 0:
            chosen = br
            break
    if chosen is None:
        raise DomainError("target outside the swept bracket union (increase the sweep)")
    rec = kappa_record(chosen.a0, chosen.am1)
    wit = interval_solver(rec, chosen.C, chosen.D, target, tol)
    alpha_member = f4_member_from_desc(wit.x_node.lo_desc)
    beta_member = f4_member_from_desc(wit.y_node.lo_desc)
    seq = BiSeq(
        right=OneSidedSeq((chosen.a0,) + alpha_member.head, alpha_member.period),
        left=OneSidedSeq((chosen.am1,) + beta_member.head, beta_member.period),
    )
    value = rec.evaluate(wit.x_node.lo, wit.y_node.lo)
    return HallWitness(
        sequence=seq,
        a0=chosen.a0,
        am1=chosen.am1,
        value=value,
        target=target,
        residual_bound=wit.residual_bound,
        solver=wit,
    )
