"""Generalized Perron functions and their periodic spectral machinery.

A Perron function f(alpha, beta, n_0..n_{l-1}) evaluated along a sequence at
offset k uses the fractional arguments alpha_{k+l-1} and beta_k together
with the integral parameters a_k .. a_{k+l-1}; an infinity marker among the
integral parameters short-circuits to the declared limit-at-infinity I.

This module provides evaluation, a heuristic good-continuity probe, the
bidirectional accumulation-sequence construction, and exact enumeration of
the periodic spectral values (with witnesses).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .cfrac import INF, BiSeq, OneSidedSeq, eval_tail, tail_sequence
from .exact import (
    DomainError,
    ExactNum,
    ValidatedInterval,
    exact_cmp,
    float_of,
)

Evaluator = Callable[[object, object, Tuple[int, ...]], object]


@dataclass(frozen=True)
class PerronSpec:
    """A generalized Perron function record.

    ``evaluate(alpha, beta, ints)`` must be written with plain arithmetic
    operators so it works on exact numbers and on validated intervals alike.
    ``infinity_value`` is returned whenever an integral parameter is the
    infinity marker.
    """

    name: str
    arity: int
    evaluate: Evaluator
    infinity_value: object

    def __call__(self, alpha, beta, ints=()):
        ints = tuple(ints)
        if len(ints) != self.arity:
            raise DomainError(f"{self.name} expects {self.arity} integral parameters")
        if any(n == INF for n in ints):
            return self.infinity_value
        return self.evaluate(alpha, beta, ints)


def markov_spec() -> PerronSpec:
    """f(alpha, beta, a0) = a0 + alpha + beta; Lagrange/Markov spectra."""
    return PerronSpec("markov", 1, lambda a, b, n: n[0] + a + b, math.inf)


def mordell_spec() -> PerronSpec:
    """f(alpha, beta) = 1/(1 + alpha*beta); Dirichlet/Mordell-Gruber spectra."""
    return PerronSpec("mordell", 0, lambda a, b, n: 1 / (Fraction(1) + a * b), Fraction(1))


def evaluate_P(spec: PerronSpec, seq: BiSeq, k: int, depth: Optional[int] = None):
    """P_k along the sequence: f(alpha_{k+l-1}, beta_k, a_k..a_{k+l-1}).

    Exact tails for terminating/periodic sides; with an explicit depth the
    fractional arguments become truncation intervals instead.
    """
    l = spec.arity
    ints = []
    for i in range(k, k + l):
        if not seq.defined(i):
            raise DomainError(f"offset {i} outside the defined range")
        ints.append(seq.term(i))
    if any(n == INF for n in ints):
        return spec.infinity_value
    alpha = eval_tail(tail_sequence(seq, k + l - 1, +1), depth)
    beta = eval_tail(tail_sequence(seq, k, -1), depth)
    return spec.evaluate(alpha, beta, tuple(int(n) for n in ints))


# ---------------------------------------------------------------------------
# good-continuity probe
# ---------------------------------------------------------------------------


@dataclass
class ContinuityReport:
    passed: bool
    integral_limit: dict
    fractional_modulus: dict
    note: str = "heuristic: no violation found at this resolution (never a proof)"


def probe_good_continuity(
    spec: PerronSpec, grid_n: int = 9, entry_cap: int = 64, threshold: float = 0.35
) -> ContinuityReport:
    """Evidence-gathering probe of the two good-continuity clauses.

    (a) integral parameters pushed to entry_cap, 4*entry_cap: deviation of f
        from the declared I must shrink (divergence counts when I is inf);
    (b) per small integral tuple, the max adjacent-cell jump over an
        (alpha, beta) grid must shrink when the grid is refined.
    """
    if grid_n < 2:
        raise DomainError("grid_n must be >= 2")
    l = spec.arity
    grid = [Fraction(i, grid_n - 1) for i in range(grid_n)]

    integral = {"applicable": l > 0}
    ok_a = True
    if l > 0:
        devs = []
        for cap in (entry_cap, 4 * entry_cap):
            worst = 0.0
            for pos in range(l):
                for delta in range(4):  # sample a stretch above the cap
                    ints = [1] * l
                    ints[pos] = cap + delta
                    for a in grid:
                        for b in grid:
                            v = float_of(spec.evaluate(a, b, tuple(ints)))
                            worst = max(worst, _deviation(v, spec.infinity_value))
            devs.append(worst)
        integral["deviation_at_caps"] = devs
        ok_a = devs[-1] <= max(threshold, 0.75 * devs[0])
    integral["passed"] = ok_a

    ok_b = True
    jumps = {}
    tuples = [()] if l == 0 else list(itertools.product((1, 2), repeat=l))
    for ints in tuples:
        coarse = _max_adjacent_jump(spec, ints, grid_n)
        fine = _max_adjacent_jump(spec, ints, 2 * grid_n)
        jumps[ints] = (coarse, fine)
        if not (fine <= max(threshold, 0.75 * coarse)):
            ok_b = False
    fractional = {"jumps": jumps, "passed": ok_b}

    return ContinuityReport(passed=ok_a and ok_b, integral_limit=integral, fractional_modulus=fractional)


def _deviation(v: float, limit) -> float:
    if limit in (math.inf, -math.inf):
        # divergence evidence: smaller 1/|v| means closer to an infinite limit
        return 0.0 if v == limit else 1.0 / max(abs(v), 1e-9)
    return abs(v - float_of(limit))


def _max_adjacent_jump(spec: PerronSpec, ints: tuple, n: int) -> float:
    grid = [Fraction(i, n - 1) for i in range(n)]
    vals = [[float_of(spec.evaluate(a, b, ints)) for b in grid] for a in grid]
    worst = 0.0
    for i in range(n):
        for j in range(n):
            if i + 1 < n:
                worst = max(worst, abs(vals[i + 1][j] - vals[i][j]))
            if j + 1 < n:
                worst = max(worst, abs(vals[i][j + 1] - vals[i][j]))
    return worst


# ---------------------------------------------------------------------------
# bidirectional accumulation sequences
# ---------------------------------------------------------------------------


@dataclass
class TermEvidence:
    value: object  # int or INF
    count: int
    witnesses: List[int]
    decided: bool  # False when the recurrence call saturated the budget


@dataclass
class AccumulationResult:
    sequence: BiSeq
    provenance: Dict[int, TermEvidence]
    examined: int


def accumulation_sequence(
    family: Union[Sequence[BiSeq], Callable[[int], BiSeq]],
    window: int,
    examine: Optional[int] = None,
    min_recurrence: int = 2,
) -> AccumulationResult:
    """Liminf-based diagonal limit of a family of sequences.

    The family is finitely presented: an explicit list, or a generator rule
    together with ``examine`` (members 1..examine are inspected).  A term
    becomes the smallest value recurring (>= min_recurrence times) among the
    members matching all previously fixed terms; when nothing recurs the
    term is the infinity marker and that side closes.  Provenance records
    witnesses and whether each decision was budget-limited.
    """
    if window < 1:
        raise DomainError("window must be >= 1")
    if callable(family):
        if examine is None:
            raise DomainError("generator-rule families need an examination budget")
        members = [family(j) for j in range(1, examine + 1)]
    else:
        members = list(family)
    if not members:
        raise DomainError("empty family")

    def term(j: int, r: int):
        s = members[j]
        return s.term(r) if s.defined(r) else INF

    alive = list(range(len(members)))
    prov: Dict[int, TermEvidence] = {}
    right: List[int] = []
    left: List[int] = []
    right_open, left_open = True, True

    def fix(r: int) -> object:
        nonlocal alive
        counts: Dict[object, List[int]] = {}
        for j in alive:
            counts.setdefault(term(j, r), []).append(j)
        finite = sorted(v for v in counts if v != INF and len(counts[v]) >= min_recurrence)
        if finite:
            c = finite[0]
            alive = counts[c]
            prov[r] = TermEvidence(c, len(alive), alive[:10], decided=len(alive) >= min_recurrence)
            return c
        winf = counts.get(INF, [])
        prov[r] = TermEvidence(INF, len(winf), winf[:10], decided=bool(winf))
        return INF

    for r in range(0, window + 1):
        if right_open:
            c = fix(r)
            if c == INF:
                right_open = False
            else:
                right.append(int(c))
        if left_open:
            c = fix(-1 - r)
            if c == INF:
                left_open = False
            else:
                left.append(int(c))
        if not right_open and not left_open:
            break

    seq = BiSeq(
        right=OneSidedSeq(tuple(right), (), not right_open),
        left=OneSidedSeq(tuple(left), (), not left_open),
    )
    return AccumulationResult(sequence=seq, provenance=prov, examined=len(members))


# ---------------------------------------------------------------------------
# periodic spectral sets (tau')
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TauEntry:
    value: ExactNum
    witness_period: tuple
    offset: int

    def as_json(self) -> dict:
        from .exact import exact_to_json

        return {
            "value": exact_to_json(self.value),
            "decimal": float_of(self.value),
            "witness_period": list(self.witness_period),
            "offset": self.offset,
        }


@dataclass
class TauSet:
    entries: List[TauEntry]
    partial: bool = False

    def values(self) -> list:
        return [e.value for e in self.entries]


def _canonical_rotation(t: tuple) -> tuple:
    return min(t[i:] + t[:i] for i in range(len(t)))


def _primitive(t: tuple) -> bool:
    n = len(t)
    for d in range(1, n):
        if n % d == 0 and t == t[:d] * (n // d):
            return False
    return True


def tau_enumerate(
    spec: PerronSpec,
    limit: str,
    max_period: int,
    max_entry: int,
    offset_parity: Optional[int] = None,
    budget: int = 500_000,
) -> TauSet:
    """Exact {limit_k P_k} over purely periodic sequences within bounds.

    Values are deduplicated by canonical-form equality; each keeps its
    lexicographically minimal witness period.  ``offset_parity`` restricts
    the offsets entering the limit (0 for even offsets), used by spectra
    defined over one pivot parity.
    """
    if limit not in ("inf", "sup"):
        raise DomainError("limit must be 'inf' or 'sup'")
    if max_period < 1 or max_entry < 1:
        raise DomainError("bounds must be >= 1")
    best: Dict[object, TauEntry] = {}
    partial = False
    seen = 0
    for p in range(1, max_period + 1):
        for period in itertools.product(range(1, max_entry + 1), repeat=p):
            if period != _canonical_rotation(period) or not _primitive(period):
                continue
            seen += 1
            if seen > budget:
                partial = True
                break
            seq = BiSeq.from_period(period)
            if offset_parity is None:
                offsets = range(p)
            else:
                # same-parity offsets sweep all residues when p is odd,
                # one residue class when p is even
                offsets = range(offset_parity, 2 * p, 2)
            vals = [(k, evaluate_P(spec, seq, k)) for k in offsets]
            pick = min if limit == "inf" else max
            off, val = vals[0]
            for k, v in vals[1:]:
                if (limit == "inf" and exact_cmp(v, val) < 0) or (limit == "sup" and exact_cmp(v, val) > 0):
                    off, val = k, v
            key = _value_key(val)
            entry = TauEntry(value=val, witness_period=period, offset=off)
            cur = best.get(key)
            if cur is None or (len(period), period) < (len(cur.witness_period), cur.witness_period):
                best[key] = entry
        if partial:
            break
    entries = sorted(best.values(), key=cmp_to_key(lambda a, b: exact_cmp(a.value, b.value)))
    return TauSet(entries=entries, partial=partial)


def _value_key(v: ExactNum):
    from .exact import QuadraticSurd

    if isinstance(v, QuadraticSurd):
        return ("surd", v.p, v.q, v.d, v.r)
    f = Fraction(v)
    return ("rat", f.numerator, f.denominator)
