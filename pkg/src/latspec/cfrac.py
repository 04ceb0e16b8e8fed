"""Continued-fraction expansion sequences and their tail functions.

A one-sided expansion sequence is a (possibly eventually periodic) stream of
positive integers, optionally cut off by a single terminal infinity marker.
A bi-infinite sequence is a pair of one-sided sequences glued at an origin:
``right`` holds a0, a1, ... and ``left`` holds a-1, a-2, ...

The tail functions alpha_k = [0; a_{k+1}, a_{k+2}, ...] and
beta_k = [0; a_{k-1}, a_{k-2}, ...] are exact quadratic surds whenever the
relevant side is eventually periodic, and validated truncation intervals
otherwise.  A tail that begins with the infinity marker is exactly 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Union

from .exact import (
    DomainError,
    ExactNum,
    QuadraticSurd,
    ValidatedInterval,
    exact_add,
    exact_cmp,
    exact_div,
    exact_mul,
    surd_make,
    to_interval,
)

INF = math.inf

DEFAULT_TAIL_DEPTH = 64


class InvalidTermError(DomainError):
    pass


def _check_terms(terms: Iterable[int]) -> tuple:
    out = tuple(int(t) for t in terms)
    for t in out:
        if t < 1:
            raise InvalidTermError(f"continued fraction term {t} < 1")
    return out


@dataclass(frozen=True)
class OneSidedSeq:
    """One-sided expansion sequence: explicit head, then an optional periodic
    tail or a terminal infinity marker (never both)."""

    head: tuple = ()
    period: tuple = ()
    terminal_infinity: bool = False

    def __post_init__(self):
        object.__setattr__(self, "head", _check_terms(self.head))
        object.__setattr__(self, "period", _check_terms(self.period))
        if self.period and self.terminal_infinity:
            raise InvalidTermError("periodic tail cannot follow a terminal infinity")

    # -- structure ---------------------------------------------------------
    @property
    def is_infinite(self) -> bool:
        return bool(self.period)

    def __len__(self):
        if self.period:
            raise DomainError("infinite sequence has no length")
        return len(self.head)

    def term(self, i: int):
        """The i-th term (0-based); INF at the terminal marker."""
        if i < 0:
            raise IndexError(i)
        if i < len(self.head):
            return self.head[i]
        if self.period:
            return self.period[(i - len(self.head)) % len(self.period)]
        if self.terminal_infinity and i == len(self.head):
            return INF
        raise IndexError(f"term {i} beyond the end of the sequence")

    def defined(self, i: int) -> bool:
        if i < len(self.head) or self.period:
            return i >= 0
        return self.terminal_infinity and i == len(self.head)

    def shift(self, k: int) -> "OneSidedSeq":
        """Drop the first k terms (requires k within the defined finite part)."""
        if k == 0:
            return self
        if k < 0:
            raise IndexError(k)
        if k <= len(self.head):
            return OneSidedSeq(self.head[k:], self.period, self.terminal_infinity)
        if not self.period:
            raise IndexError(f"shift {k} beyond the end")
        j = (k - len(self.head)) % len(self.period)
        return OneSidedSeq((), self.period[j:] + self.period[:j], False)

    def prepend(self, terms) -> "OneSidedSeq":
        return OneSidedSeq(tuple(terms) + self.head, self.period, self.terminal_infinity)

    def prefix(self, n: int) -> tuple:
        """First n finite terms (raises if fewer exist before the cutoff)."""
        if not self.period and n > len(self.head):
            raise IndexError(f"only {len(self.head)} finite terms available")
        return tuple(self.term(i) for i in range(n))

    def available(self, n: int) -> int:
        """min(n, number of finite terms)."""
        return n if self.period else min(n, len(self.head))

    # -- serialization -----------------------------------------------------
    def as_json(self) -> dict:
        if self.period:
            return {"kind": "periodic", "preperiod": list(self.head), "period": list(self.period)}
        return {"kind": "finite", "terms": list(self.head), "terminal_infinity": self.terminal_infinity}

    @staticmethod
    def from_json(obj: dict) -> "OneSidedSeq":
        if obj["kind"] == "periodic":
            return OneSidedSeq(tuple(obj.get("preperiod", ())), tuple(obj["period"]))
        if obj["kind"] == "finite":
            return OneSidedSeq(tuple(obj["terms"]), (), bool(obj.get("terminal_infinity", False)))
        raise DomainError(f"unknown sequence kind {obj.get('kind')!r}")


@dataclass(frozen=True)
class BiSeq:
    """Bi-infinite (or one/both-sided-terminated) index sequence.

    ``right.term(i)`` is a_i for i >= 0 and ``left.term(i)`` is a_{-1-i}.
    """

    right: OneSidedSeq
    left: OneSidedSeq

    def term(self, i: int):
        return self.right.term(i) if i >= 0 else self.left.term(-1 - i)

    def defined(self, i: int) -> bool:
        return self.right.defined(i) if i >= 0 else self.left.defined(-1 - i)

    @staticmethod
    def from_period(period) -> "BiSeq":
        period = _check_terms(period)
        return BiSeq(
            right=OneSidedSeq((), period),
            left=OneSidedSeq((), tuple(reversed(period))),
        )

    @staticmethod
    def from_one_sided(seq: OneSidedSeq) -> "BiSeq":
        """Mono-infinite embedding: no terms before a0 (left side is a bare
        infinity marker, so beta_0 = 0)."""
        return BiSeq(right=seq, left=OneSidedSeq((), (), True))

    @property
    def purely_periodic(self) -> bool:
        r, l = self.right, self.left
        if not (r.period and l.period and not r.head and not l.head):
            return False
        m = len(r.period)
        if len(l.period) != m:
            return False
        return all(l.period[i] == r.period[(-1 - i) % m] for i in range(m))

    def period_length(self) -> int:
        if not self.purely_periodic:
            raise DomainError("not purely periodic")
        return len(self.right.period)

    def shift(self, k: int) -> "BiSeq":
        """Re-index so the new a_0 is the old a_k (pure re-indexing)."""
        if k == 0:
            return self
        terms_r, terms_l = [], []
        # materialize enough explicit terms around the new origin
        if k > 0:
            for i in range(k - 1, -1, -1):
                t = self.term(i)
                if t == INF:
                    return BiSeq(self.right.shift(k), OneSidedSeq((), (), True))
                terms_l.append(int(t))
            return BiSeq(self.right.shift(k), self.left.prepend(terms_l))
        for i in range(k, 0):
            t = self.term(i)
            if t == INF:
                return BiSeq(OneSidedSeq((), (), True), self.left.shift(-k))
            terms_r.append(int(t))
        return BiSeq(self.right.prepend(terms_r), self.left.shift(-k))

    def as_json(self) -> dict:
        return {"kind": "bi", "right": self.right.as_json(), "left": self.left.as_json()}

    @staticmethod
    def from_json(obj: dict) -> "BiSeq":
        if obj.get("kind") == "bi":
            return BiSeq(OneSidedSeq.from_json(obj["right"]), OneSidedSeq.from_json(obj["left"]))
        if obj.get("kind") == "periodic" and not obj.get("preperiod"):
            return BiSeq.from_period(obj["period"])
        # a one-sided sequence denotes the mono-infinite embedding
        return BiSeq.from_one_sided(OneSidedSeq.from_json(obj))


def parse_sequence(obj) -> Union[OneSidedSeq, BiSeq]:
    if obj.get("kind") == "bi":
        return BiSeq.from_json(obj)
    return OneSidedSeq.from_json(obj)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def convergent_matrix(terms) -> tuple:
    """(p_n, q_n, p_{n-1}, q_{n-1}) for [0; t1, ..., tn]."""
    p0, q0, p1, q1 = 1, 0, 0, 1  # p_{-1}/q_{-1}, p_0/q_0
    for t in terms:
        p0, q0, p1, q1 = p1, q1, t * p1 + p0, t * q1 + q0
    return p1, q1, p0, q0


def eval_finite(terms) -> Fraction:
    """Value of [0; t1, ..., tn]; the empty expansion is 0."""
    terms = _check_terms(terms)
    p, q, _, _ = convergent_matrix(terms)
    return Fraction(p, q)


def mobius_apply(terms, x: ExactNum) -> ExactNum:
    """Value of [0; terms..., continuation] given the continuation's value x
    in [0, 1]; exact in x's field."""
    p, q, pp, qq = convergent_matrix(_check_terms(terms))
    num = exact_add(Fraction(p), exact_mul(Fraction(pp), x))
    den = exact_add(Fraction(q), exact_mul(Fraction(qq), x))
    return exact_div(num, den)


def eval_periodic(preperiod, period) -> ExactNum:
    """Exact value of [0; preperiod, periodic-tail] as a quadratic surd."""
    period = _check_terms(period)
    if not period:
        raise InvalidTermError("empty period")
    return mobius_apply(_check_terms(preperiod), _purely_periodic_value(period))


@lru_cache(maxsize=65536)
def _purely_periodic_value(period: tuple) -> ExactNum:
    p, q, pp, qq = convergent_matrix(period)
    # t = (p + pp*t) / (q + qq*t)  =>  qq t^2 + (q - pp) t - p = 0, t > 0
    disc = (q - pp) ** 2 + 4 * qq * p
    return surd_make(-(q - pp), 1, disc, 2 * qq)


def eval_onesided(seq: OneSidedSeq) -> ExactNum:
    """Exact value of a one-sided sequence (finite or eventually periodic).

    A terminal infinity contributes nothing: [0; t1..tn, inf] = [0; t1..tn].
    """
    if seq.period:
        return eval_periodic(seq.head, seq.period)
    return eval_finite(seq.head)


def convergents(seq: OneSidedSeq, n: int) -> list:
    """First n convergents p_k/q_k of a one-sided sequence."""
    if n < 1:
        raise DomainError("need n >= 1")
    if not seq.period and n > len(seq.head):
        raise DomainError(f"only {len(seq.head)} terms available, {n} requested")
    out = []
    p0, q0, p1, q1 = 1, 0, 0, 1
    for i in range(n):
        t = seq.term(i)
        p0, q0, p1, q1 = p1, q1, t * p1 + p0, t * q1 + q0
        out.append(Fraction(p1, q1))
    return out


def compare_cf(s: OneSidedSeq, t: OneSidedSeq) -> int:
    """Exact ordering of the values of two one-sided sequences.

    Walks to the first differing term and applies the parity rule (a larger
    term at an even position of [s0; s1, ...] makes the value larger at
    position 0, smaller at position 1, ...).  A sequence that ends is treated
    as having an infinite term there.  Both sequences here start with the
    implicit integer part s0 = 0, so term index i corresponds to position
    i + 1 of the comparison lemma.
    """
    bound = _comparison_bound(s, t)
    for i in range(bound):
        a = s.term(i) if s.defined(i) else INF
        b = t.term(i) if t.defined(i) else INF
        if a == b:
            if a == INF:
                return 0
            continue
        # position in the lemma's indexing is i+1
        smaller_first = a < b
        if (i + 1) % 2 == 0:
            return -1 if smaller_first else 1
        return 1 if smaller_first else -1
    return 0


def _comparison_bound(s: OneSidedSeq, t: OneSidedSeq) -> int:
    def span(u: OneSidedSeq) -> int:
        return len(u.head) + (len(u.period) if u.period else 1)

    if s.period and t.period:
        tail = math.lcm(len(s.period), len(t.period))
        return max(len(s.head), len(t.head)) + 2 * tail + 2
    return span(s) + span(t) + 2


def truncation_interval(seq: OneSidedSeq, n: int) -> ValidatedInterval:
    """Enclosure of the sequence's value from its first n terms.

    Endpoints are [0; a1..an] and [0; a1..a_{n}+1]; the width halves at
    worst every two terms, so it is at most 2^-n.
    """
    if n < 0:
        raise DomainError("negative depth")
    if n == 0:
        return ValidatedInterval(Fraction(0), Fraction(1))
    terms = list(seq.prefix(n))
    a = eval_finite(terms)
    terms[-1] += 1
    b = eval_finite(terms)
    return ValidatedInterval(min(a, b), max(a, b))


@dataclass(frozen=True)
class TailPair:
    """alpha = [0; a_{k+1}, ...] and beta = [0; a_{k-1}, ...] at one offset."""

    alpha: object
    beta: object


def tail_sequence(seq: BiSeq, k: int, direction: int) -> OneSidedSeq:
    """One-sided sequence of the tail at offset k.

    direction +1: terms a_{k+1}, a_{k+2}, ... (alpha_k);
    direction -1: terms a_{k-1}, a_{k-2}, ... (beta_k).
    """
    if direction == 1:
        if k + 1 >= 0:
            return seq.right.shift(k + 1)
        # cross the origin: explicit terms a_{k+1} .. a_{-1}, then the right side
        head = []
        for i in range(k + 1, 0):
            tm = seq.term(i)
            if tm == INF:
                return OneSidedSeq(tuple(head), (), True)
            head.append(int(tm))
        return seq.right.prepend(head)
    if direction == -1:
        if k <= 0:
            return seq.left.shift(-k)
        head = []
        for i in range(k - 1, -1, -1):
            tm = seq.term(i)
            if tm == INF:
                return OneSidedSeq(tuple(head), (), True)
            head.append(int(tm))
        return seq.left.prepend(head)
    raise DomainError("direction must be +1 or -1")


def eval_tail(seq: OneSidedSeq, depth: Optional[int] = None):
    """Value of a tail sequence.

    With depth=None the value is exact (every representable tail terminates
    or is eventually periodic).  A positive depth forces a truncation
    interval from the first `depth` terms instead, which keeps re-evaluation
    paths independent of the exact periodic solver; tails that terminate
    within the depth still come out exact.
    """
    if depth is None:
        return eval_onesided(seq)
    if not seq.period:
        return eval_finite(seq.head)
    return truncation_interval(seq, depth)


def tails_at(seq: BiSeq, k: int, depth: Optional[int] = None) -> TailPair:
    """TailPair (alpha_k, beta_k); exact for periodic sides, intervals
    otherwise.  A tail starting at an infinity marker is exactly 0."""
    if not seq.defined(k):
        raise DomainError(f"offset {k} outside the defined range")
    alpha = eval_tail(tail_sequence(seq, k, +1), depth)
    beta = eval_tail(tail_sequence(seq, k, -1), depth)
    return TailPair(alpha=alpha, beta=beta)


def cf_expansion_of(x: ExactNum, n: int) -> list:
    """First n continued-fraction terms of an exact x in (0, 1)."""
    from .exact import exact_floor, exact_sign, exact_sub

    terms = []
    cur = x
    for _ in range(n):
        if exact_sign(cur) == 0:
            break
        inv = exact_div(Fraction(1), cur)
        a = exact_floor(inv)
        terms.append(a)
        cur = exact_sub(inv, Fraction(a))
    return terms
