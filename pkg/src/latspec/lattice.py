"""Planar unimodular lattices: pivot chains, index sequences, reconstruction,
flow-group canonicalization, and best approximants.

Coordinates are exact (Fraction or QuadraticSurd).  A lattice stores a raw
basis together with ``scale_sq``: the true basis is raw / sqrt(scale_sq).
Pivot recurrences, index extraction and box tests are scale-free, so they
run entirely in the coordinate field; the irrational global scale only
enters logarithmic quantities downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .cfrac import INF, BiSeq, OneSidedSeq, cf_expansion_of, tails_at
from .exact import (
    DomainError,
    ExactNum,
    MixedRadicandError,
    PrecisionExhausted,
    ValidatedInterval,
    as_exact,
    exact_abs,
    exact_add,
    exact_cmp,
    exact_div,
    exact_floor,
    exact_from_json,
    exact_mul,
    exact_neg,
    exact_sign,
    exact_sub,
    exact_to_json,
    float_of,
    is_rational,
    surd_make,
)

Vec = Tuple[ExactNum, ExactNum]


def _vadd(a: Vec, b: Vec) -> Vec:
    return (exact_add(a[0], b[0]), exact_add(a[1], b[1]))


def _vsub(a: Vec, b: Vec) -> Vec:
    return (exact_sub(a[0], b[0]), exact_sub(a[1], b[1]))


def _vscale(k, a: Vec) -> Vec:
    return (exact_mul(k, a[0]), exact_mul(k, a[1]))


def _det(a: Vec, b: Vec) -> ExactNum:
    return exact_sub(exact_mul(a[0], b[1]), exact_mul(a[1], b[0]))


def _dot(a: Vec, b: Vec) -> ExactNum:
    return exact_add(exact_mul(a[0], b[0]), exact_mul(a[1], b[1]))


@dataclass(frozen=True)
class Lattice2D:
    """Lattice spanned by the raw basis, true coordinates raw/sqrt(scale_sq)."""

    basis: Tuple[Vec, Vec]
    scale_sq: ExactNum = Fraction(1)

    def __post_init__(self):
        u, v = self.basis
        object.__setattr__(self, "basis", ((as_exact(u[0]), as_exact(u[1])), (as_exact(v[0]), as_exact(v[1]))))
        object.__setattr__(self, "scale_sq", as_exact(self.scale_sq))
        if exact_sign(self.scale_sq) <= 0:
            raise DomainError("scale_sq must be positive")
        if exact_sign(self.covolume_raw) == 0:
            raise DomainError("degenerate basis")

    @property
    def covolume_raw(self) -> ExactNum:
        return exact_abs(_det(*self.basis))

    def is_unimodular(self) -> bool:
        """True covolume equals 1, i.e. |det raw| = scale_sq, exactly."""
        try:
            return exact_cmp(self.covolume_raw, self.scale_sq) == 0
        except PrecisionExhausted:
            return False

    def point(self, m: int, n: int) -> Vec:
        u, v = self.basis
        return _vadd(_vscale(Fraction(m), u), _vscale(Fraction(n), v))

    def classify(self) -> str:
        """'bi' | 'mono_x' | 'mono_y' | 'finite' | 'undecided'."""
        u, v = self.basis
        try:
            on_x = _axis_solvable(u[1], v[1])   # some m*uy + n*vy = 0
            on_y = _axis_solvable(u[0], v[0])
        except MixedRadicandError:
            return "undecided"
        if on_x and on_y:
            return "finite"
        if on_x:
            return "mono_x"
        if on_y:
            return "mono_y"
        return "bi"

    def as_json(self) -> dict:
        u, v = self.basis
        out = {"basis": [[exact_to_json(u[0]), exact_to_json(u[1])], [exact_to_json(v[0]), exact_to_json(v[1])]]}
        if self.scale_sq != Fraction(1):
            out["scale_sq"] = exact_to_json(self.scale_sq)
        return out

    @staticmethod
    def from_json(obj: dict) -> "Lattice2D":
        (a, b), (c, d) = obj["basis"]
        scale = exact_from_json(obj["scale_sq"]) if "scale_sq" in obj else Fraction(1)
        return Lattice2D(
            ((exact_from_json(a), exact_from_json(b)), (exact_from_json(c), exact_from_json(d))),
            scale,
        )


def _axis_solvable(a: ExactNum, b: ExactNum) -> bool:
    """Does m*a + n*b = 0 admit a nonzero integer solution?"""
    if exact_sign(a) == 0 or exact_sign(b) == 0:
        return True
    return is_rational(exact_div(a, b))


INTEGER_LATTICE = Lattice2D(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))))


# ---------------------------------------------------------------------------
# pivot chains
# ---------------------------------------------------------------------------


@dataclass
class PivotChain:
    """Pivots ordered upward (y weakly increasing), with index data.

    ``origin`` points at the pivot playing the role of A_0.  ``indices[i]``
    is the positive integer a with pivots[i+1] = a * pivots[i] + pivots[i-1]
    (None where the recurrence is broken by a forced mono-infinite pivot).
    ``hit_x_axis`` / ``hit_y_axis`` flag chains terminated by axis points;
    ``truncated_*`` flag window cutoffs (including infinity markers in
    reconstruction input).
    """

    pivots: List[Vec]
    origin: int = 0
    scale_sq: ExactNum = Fraction(1)
    hit_x_axis: bool = False
    hit_y_axis: bool = False
    truncated_low: bool = False
    truncated_high: bool = False

    @property
    def indices(self) -> List[Optional[int]]:
        out = []
        for i in range(1, len(self.pivots) - 1):
            out.append(_index_of_triple(self.pivots[i - 1], self.pivots[i], self.pivots[i + 1]))
        return out

    def offsets(self) -> range:
        return range(-self.origin, len(self.pivots) - self.origin)

    def pivot(self, j: int) -> Vec:
        return self.pivots[self.origin + j]


def _index_of_triple(prev: Vec, cur: Vec, nxt: Vec) -> Optional[int]:
    """Recover a with nxt = a*cur + prev, or None when no integer works."""
    diff = _vsub(nxt, prev)
    for c in (0, 1):
        if exact_sign(cur[c]) != 0:
            a = exact_div(diff[c], cur[c])
            break
    else:
        return None
    if not is_rational(a) or Fraction(a).denominator != 1:
        return None
    a_int = int(Fraction(a))
    ok = all(exact_cmp(exact_add(_vscale(Fraction(a_int), cur)[c], prev[c]), nxt[c]) == 0 for c in (0, 1))
    return a_int if ok and a_int >= 1 else None


def _normalize_up(p: Vec) -> Vec:
    sy = exact_sign(p[1])
    if sy < 0 or (sy == 0 and exact_sign(p[0]) < 0):
        return (exact_neg(p[0]), exact_neg(p[1]))
    return p


def gauss_reduce(u: Vec, v: Vec) -> Tuple[Vec, Vec]:
    """Lagrange-reduced basis (exact arithmetic), shortest vector first."""
    for _ in range(10_000):
        if exact_cmp(_dot(u, u), _dot(v, v)) > 0:
            u, v = v, u
        mu = exact_div(_dot(u, v), _dot(u, u))
        k = exact_floor(exact_add(mu, Fraction(1, 2)))
        if k != 0:
            v = _vsub(v, _vscale(Fraction(k), u))
        if exact_cmp(_dot(v, v), _dot(u, u)) >= 0:
            return u, v
    raise PrecisionExhausted("basis reduction did not converge")


def _enumerate_box(lat: Lattice2D, X: ExactNum, Y: ExactNum) -> list:
    """All nonzero lattice points with |x| <= X, |y| <= Y (raw coordinates),
    normalized to the upper half plane."""
    u, v = gauss_reduce(*lat.basis)
    covol = exact_abs(_det(u, v))
    m_hi = exact_floor(exact_div(exact_add(exact_mul(X, exact_abs(v[1])), exact_mul(Y, exact_abs(v[0]))), covol)) + 1
    n_hi = exact_floor(exact_div(exact_add(exact_mul(X, exact_abs(u[1])), exact_mul(Y, exact_abs(u[0]))), covol)) + 1
    out = []
    seen = set()
    for m in range(-m_hi, m_hi + 1):
        base = _vscale(Fraction(m), u)
        for n in range(-n_hi, n_hi + 1):
            if m == 0 and n == 0:
                continue
            p = _vadd(base, _vscale(Fraction(n), v))
            if exact_cmp(exact_abs(p[0]), X) <= 0 and exact_cmp(exact_abs(p[1]), Y) <= 0:
                q = _normalize_up(p)
                key = (q[0], q[1])
                if key not in seen:
                    seen.add(key)
                    out.append(q)
    return out


def _linf_shortest(lat: Lattice2D) -> Vec:
    u, v = gauss_reduce(*lat.basis)
    best = None
    best_norm = None
    for m in range(-3, 4):
        for n in range(-3, 4):
            if m == 0 and n == 0:
                continue
            p = _vadd(_vscale(Fraction(m), u), _vscale(Fraction(n), v))
            norm = p[0] if exact_cmp(exact_abs(p[0]), exact_abs(p[1])) >= 0 else p[1]
            norm = exact_abs(norm)
            if best is None or exact_cmp(norm, best_norm) < 0:
                best, best_norm = _normalize_up(p), norm
            elif exact_cmp(norm, best_norm) == 0:
                q = _normalize_up(p)
                if exact_cmp(q[1], best[1]) < 0 or (
                    exact_cmp(q[1], best[1]) == 0 and exact_cmp(exact_abs(q[0]), exact_abs(best[0])) < 0
                ):
                    best = q
    return best


def _successor(lat: Lattice2D, p0: Vec) -> Optional[Vec]:
    """Next pivot above p0: minimal y > y0 among |x| < |x0| (then min |x|)."""
    x0, y0 = exact_abs(p0[0]), p0[1]
    if exact_sign(x0) == 0:
        return None  # on the y axis: topmost pivot
    covol = lat.covolume_raw
    ybound = exact_add(exact_mul(Fraction(2), exact_div(covol, x0)), exact_abs(y0))
    best = None
    for q in _enumerate_box(lat, x0, ybound):
        if exact_cmp(exact_abs(q[0]), x0) >= 0 or exact_cmp(q[1], y0) <= 0:
            continue
        if best is None or exact_cmp(q[1], best[1]) < 0 or (
            exact_cmp(q[1], best[1]) == 0 and exact_cmp(exact_abs(q[0]), exact_abs(best[0])) < 0
        ):
            best = q
    return best


def _predecessor(lat: Lattice2D, p0: Vec) -> Optional[Vec]:
    """Pivot below a y-axis point p0 = (0, y0): minimal |x| among 0 <= y < y0."""
    y0 = p0[1]
    if exact_sign(y0) <= 0:
        return None
    covol = lat.covolume_raw
    xbound = exact_mul(Fraction(2), exact_div(covol, y0))
    best = None
    for q in _enumerate_box(lat, xbound, y0):
        if exact_cmp(q[1], y0) >= 0 or exact_sign(q[1]) < 0:
            continue
        if exact_sign(q[0]) == 0:
            continue
        if best is None or exact_cmp(exact_abs(q[0]), exact_abs(best[0])) < 0 or (
            exact_cmp(exact_abs(q[0]), exact_abs(best[0])) == 0 and exact_cmp(q[1], best[1]) > 0
        ):
            best = q
    return best


def _walk_up(prev: Vec, cur: Vec, stop) -> Tuple[List[Vec], bool]:
    """Continue the chain upward from consecutive (prev, cur); stops at a
    y-axis terminal or when stop(point) says so.  Returns (points, hit_axis)."""
    out = []
    hit = False
    while True:
        if exact_sign(cur[0]) == 0:
            hit = True
            break
        if exact_sign(prev[0]) != 0 and exact_sign(exact_mul(prev[0], cur[0])) > 0:
            raise DomainError("pivot walk invariant broken: same-sign consecutive pivots")
        a = exact_floor(exact_div(exact_abs(prev[0]), exact_abs(cur[0])))
        nxt = _vadd(prev, _vscale(Fraction(a), cur))
        prev, cur = cur, nxt
        out.append(cur)
        if stop(cur):
            break
    return out, hit


def _walk_down(cur: Vec, nxt: Vec, stop) -> Tuple[List[Vec], bool]:
    """Extend downward below consecutive (cur, nxt); stops at an x-axis
    terminal or when stop(point) says so."""
    out = []
    hit = False
    while True:
        if exact_sign(cur[1]) == 0:
            hit = True
            break
        a = exact_floor(exact_div(nxt[1], cur[1]))
        prv = _vsub(nxt, _vscale(Fraction(a), cur))
        if exact_sign(prv[1]) < 0:
            a -= 1
            prv = _vsub(nxt, _vscale(Fraction(a), cur))
        prv = _normalize_up(prv)  # x-axis terminals get positive x
        nxt, cur = cur, prv
        out.append(cur)
        if stop(cur):
            break
    return out, hit


def pivot_walk(lat: Lattice2D, x_max: ExactNum, y_max: ExactNum) -> PivotChain:
    """Pivot chain covering raw |x| <= x_max upward to raw y <= y_max.

    The walk extends one step beyond each bound (or to an axis terminal) so
    that enclosing geometry is complete for the covered window.
    """
    p0 = _linf_shortest(lat)
    if exact_sign(p0[0]) == 0:
        below = _predecessor(lat, p0)
        if below is None:
            raise DomainError("degenerate lattice: no pivot below the y-axis point")
        pair = (below, p0)
    else:
        above = _successor(lat, p0)
        if above is None:
            pair = (_predecessor(lat, p0), p0)
            if pair[0] is None:
                raise DomainError("could not seed a pivot pair")
        else:
            pair = (p0, above)

    lo, hi = pair
    downs, hit_x = _walk_down(lo, hi, lambda p: exact_cmp(exact_abs(p[0]), x_max) > 0)
    lower = list(reversed(downs)) + [lo, hi]
    inserted = _insert_forced_pivot(lower)
    # continue upward from the top consecutive pair (the forced-pivot insertion
    # can change it when the chain is just [axis, forced, neighbor])
    prev_top, top = lower[-2], lower[-1]
    ups, hit_y = _walk_up(prev_top, top, lambda p: exact_cmp(p[1], y_max) > 0)
    pivots = lower + ups
    chain = PivotChain(
        pivots=pivots,
        origin=len(downs) + (1 if inserted else 0),
        scale_sq=lat.scale_sq,
        hit_x_axis=hit_x,
        hit_y_axis=hit_y,
        truncated_low=not hit_x,
        truncated_high=not hit_y,
    )
    return chain


def _insert_forced_pivot(lower: List[Vec]) -> bool:
    """Insert the forced mono-infinite pivot next to an x-axis terminal.

    With terminal P = (p, 0) and neighbor N, the companion N - P is the
    convention's A_0 (negative x at the lowest off-axis level) whenever N
    itself has positive x; up-walking from (P, N) directly would follow the
    wrong branch, so the insertion must happen before the walk continues.
    """
    if len(lower) < 2:
        return False
    p, n = lower[0], lower[1]
    if exact_sign(p[1]) != 0 or exact_sign(n[0]) <= 0 or exact_sign(n[1]) <= 0:
        return False
    forced = _vsub(n, p)
    if exact_sign(forced[0]) >= 0:
        return False
    lower.insert(1, forced)
    return True


def pivots_of(lat: Lattice2D, y_max) -> PivotChain:
    """All pivots with raw 0 <= y <= y_max and raw |x| <= y_max, ordered;
    forced pivots included for mono-infinite lattices."""
    y_max = as_exact(y_max)
    return pivot_walk(lat, y_max, y_max)


def indices_from_pivots(chain: PivotChain) -> BiSeq:
    """Index sequence extracted from a pivot chain window (>= 3 pivots).

    Returns a BiSeq whose a_0 corresponds to the chain origin; sides are
    finite windows, terminated by infinity markers where the chain hit an
    axis.  Forced mono-infinite pivots (broken recurrence) are skipped.
    """
    pivots = [p for p in chain.pivots]
    if len(pivots) < 3:
        raise DomainError("need at least 3 pivots to extract indices")
    vals = {}
    for i in range(1, len(pivots) - 1):
        a = _index_of_triple(pivots[i - 1], pivots[i], pivots[i + 1])
        if a is not None:
            vals[i - chain.origin] = a
    right = [vals[k] for k in sorted(v for v in vals if v >= 0)]
    left = [vals[k] for k in sorted((v for v in vals if v < 0), reverse=True)]
    return BiSeq(
        right=OneSidedSeq(tuple(right), (), chain.hit_y_axis),
        left=OneSidedSeq(tuple(left), (), chain.hit_x_axis),
    )


# ---------------------------------------------------------------------------
# reconstruction from sequences
# ---------------------------------------------------------------------------


def reconstruct_biinfinite(seq: BiSeq, depth: int) -> Tuple[Lattice2D, PivotChain]:
    """Lattice and pivot chain of an index sequence.

    Raw coordinates: A_0 = (-1, 1), A_{-1} = (a_0 + alpha_0, beta_0), with
    scale_sq = a_0 + alpha_0 + beta_0; the true lattice is unimodular by
    construction.  The chain covers offsets -depth..depth, stopping early at
    infinity markers with the corresponding truncation flag cleared.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    a0 = seq.term(0)
    if a0 == INF:
        raise DomainError("a_0 must be finite")
    pair = tails_at(seq, 0)
    alpha0, beta0 = pair.alpha, pair.beta
    s = exact_add(Fraction(int(a0)), exact_add(alpha0, beta0))
    A0: Vec = (Fraction(-1), Fraction(1))
    Am1: Vec = (exact_add(Fraction(int(a0)), alpha0), beta0)
    lat = Lattice2D((A0, Am1), scale_sq=s)

    ups: List[Vec] = []
    prev, cur = Am1, A0
    hit_y = False
    for j in range(0, depth):
        a = seq.term(j) if seq.defined(j) else INF
        if a == INF:
            hit_y = True
            break
        nxt = _vadd(prev, _vscale(Fraction(int(a)), cur))
        ups.append(nxt)
        prev, cur = cur, nxt

    downs: List[Vec] = []
    cur2, nxt2 = Am1, A0
    hit_x = False
    for j in range(1, depth + 1):
        a = seq.term(-j) if seq.defined(-j) else INF
        if a == INF:
            hit_x = True
            break
        prv = _vsub(nxt2, _vscale(Fraction(int(a)), cur2))
        downs.append(prv)
        nxt2, cur2 = cur2, prv

    pivots = list(reversed(downs)) + [Am1, A0] + ups
    chain = PivotChain(
        pivots=pivots,
        origin=len(downs) + 1,
        scale_sq=s,
        hit_x_axis=hit_x,
        hit_y_axis=hit_y,
        truncated_low=not hit_x and len(downs) >= depth,
        truncated_high=not hit_y and len(ups) >= depth,
    )
    return lat, chain


def reconstruct_general(alpha: ExactNum, beta: ExactNum) -> Lattice2D:
    """Lattice with basis A = (-alpha, 1)/w, B = (1, beta)/w, w = sqrt(1+ab)."""
    alpha, beta = as_exact(alpha), as_exact(beta)
    for v in (alpha, beta):
        if exact_sign(v) < 0 or exact_cmp(v, Fraction(1)) > 0:
            raise DomainError("alpha, beta must lie in [0, 1]")
    s = exact_add(Fraction(1), exact_mul(alpha, beta))
    return Lattice2D(((exact_neg(alpha), Fraction(1)), (Fraction(1), beta)), scale_sq=s)


# ---------------------------------------------------------------------------
# equivariant group G
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    """diag(x_sign * e^t, y_sign * e^-t); e^{2t} is stored exactly."""

    x_sign: int
    y_sign: int
    e2t: ExactNum  # e^{2t}, exact and positive

    def __post_init__(self):
        if self.x_sign not in (-1, 1) or self.y_sign not in (-1, 1):
            raise DomainError("signs must be +-1")
        if exact_sign(self.e2t) <= 0:
            raise DomainError("e^{2t} must be positive")

    @property
    def t(self) -> float:
        return 0.5 * math.log(float_of(self.e2t))

    def compose(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.x_sign * other.x_sign,
            self.y_sign * other.y_sign,
            exact_mul(self.e2t, other.e2t),
        )

    def apply(self, p: Vec, bits: int = 96) -> Tuple[ValidatedInterval, ValidatedInterval]:
        """Enclosures of the transformed point (e^t is irrational in general)."""
        from .exact import to_interval

        et = to_interval(self.e2t, bits).sqrt(bits)
        x = to_interval(p[0], bits) * et * self.x_sign
        y = to_interval(p[1], bits) / et * self.y_sign
        return x, y

    def apply_exact_to_lattice(self, lat: Lattice2D) -> Lattice2D:
        """g.lat for elements whose e^{2t} is a perfect square of the field
        (then e^t is exact and coordinates stay in the field)."""
        from .exact import exact_sqrt

        et = exact_sqrt(self.e2t)
        u, v = lat.basis
        sx, sy = Fraction(self.x_sign), Fraction(self.y_sign)

        def tr(p: Vec) -> Vec:
            return (
                exact_mul(exact_mul(sx, et), p[0]),
                exact_div(exact_mul(sy, p[1]), et),
            )

        return Lattice2D((tr(u), tr(v)), scale_sq=lat.scale_sq)


IDENTITY = GroupElement(1, 1, Fraction(1))


def canonicalize_point(p: Vec) -> GroupElement:
    """The unique h in G with h*p on the ray {(x, -x) : x < 0}.

    h = diag(-sgn(x), sgn(y)) g_t with t = (ln|y| - ln|x|)/2, i.e.
    e^{2t} = |y|/|x| exactly.
    """
    x, y = as_exact(p[0]), as_exact(p[1])
    sx, sy = exact_sign(x), exact_sign(y)
    if sx == 0 or sy == 0:
        raise DomainError("point on an axis has no canonicalizer in G")
    return GroupElement(-sx, sy, exact_div(exact_abs(y), exact_abs(x)))


def mono_canonical(lat: Lattice2D) -> Tuple[GroupElement, ExactNum]:
    """For a lattice with x-axis points: the flow element g with g*lat spanned
    by (1,0) and (-alpha, 1), alpha in (0,1); returns (g, alpha).

    alpha is irrational exactly when the lattice is truly mono-infinite;
    finite-type lattices yield a rational alpha (integer alpha, i.e. lattices
    equivalent to Z^2, have no representative of this shape and raise).
    """
    if lat.classify() not in ("mono_x", "finite"):
        raise DomainError("lattice has no x-axis points (not mono-infinite)")
    if not lat.is_unimodular():
        raise DomainError("mono canonical form requires a unimodular lattice")
    u, v = lat.basis
    # primitive x-axis vector m*u + n*v (some m*uy + n*vy = 0) and a companion
    if exact_sign(u[1]) == 0:
        ax, other = u, v
    elif exact_sign(v[1]) == 0:
        ax, other = v, u
    else:
        fr = Fraction(exact_div(exact_neg(v[1]), u[1]))  # = m/n in lowest terms
        m, n = fr.numerator, fr.denominator
        ax = _vadd(_vscale(Fraction(m), u), _vscale(Fraction(n), v))
        # companion (p, q) with m*q - n*p = 1 completes a basis
        p0, q0 = _bezout(m, n)
        other = _vadd(_vscale(Fraction(p0), u), _vscale(Fraction(q0), v))
    a_raw = exact_abs(ax[0])
    s = lat.scale_sq
    # true axis length a = a_raw / sqrt(s); scaling by e^t = 1/a gives (1, 0)
    e2t = exact_div(s, exact_mul(a_raw, a_raw))
    # true y of the scaled companion is a_raw * oy / s = +-1 by unimodularity
    y_scaled = exact_div(exact_mul(a_raw, other[1]), s)
    if exact_sign(y_scaled) < 0:
        other = (exact_neg(other[0]), exact_neg(other[1]))
    x_scaled = exact_div(other[0], a_raw)
    frac = exact_sub(x_scaled, Fraction(exact_floor(x_scaled)))  # in [0, 1)
    if exact_sign(frac) == 0:
        raise DomainError("lattice has y-axis points (not mono-infinite)")
    alpha = exact_sub(Fraction(1), frac)
    return GroupElement(1, 1, e2t), alpha


def _bezout(m: int, n: int) -> Tuple[int, int]:
    """(p, q) with m*q - n*p = 1, for coprime m != 0, n > 0."""
    sm = 1 if m >= 0 else -1
    old_r, r = abs(m), n
    old_s, s_ = 1, 0
    old_t, t_ = 0, 1
    while r != 0:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s_ = s_, old_s - qt * s_
        old_t, t_ = t_, old_t - qt * t_
    # old_s*|m| + old_t*n = 1  =>  m*(sm*old_s) - n*(-old_t) = 1
    return -old_t, sm * old_s


def mono_lattice(alpha: ExactNum) -> Lattice2D:
    """Canonical mono-infinite lattice span{(1,0), (-alpha, 1)}."""
    alpha = as_exact(alpha)
    if exact_sign(alpha) <= 0 or exact_cmp(alpha, Fraction(1)) >= 0:
        raise DomainError("alpha must lie in (0, 1)")
    return Lattice2D(((Fraction(1), Fraction(0)), (exact_neg(alpha), Fraction(1))))


def best_approximants(alpha: ExactNum, q_max: int) -> List[Tuple[int, int]]:
    """Best approximants (p, q) of the second kind of alpha, q <= q_max,
    derived from the pivot chain of the mono-infinite lattice."""
    alpha = as_exact(alpha)
    if exact_sign(alpha) <= 0 or exact_cmp(alpha, Fraction(1)) >= 0:
        raise DomainError("alpha must lie in (0, 1)")
    A_m1: Vec = (Fraction(1), Fraction(0))
    A_0: Vec = (exact_neg(alpha), Fraction(1))
    points, _ = _walk_up(A_m1, A_0, lambda p: exact_cmp(p[1], Fraction(q_max)) > 0)
    chain = [A_0] + points
    by_q = {}
    for pt in chain:
        q = int(Fraction(pt[1]))
        if q > q_max:
            continue
        # x = p - q*alpha  =>  p = x + q*alpha, an exact integer
        p_val = exact_add(pt[0], exact_mul(Fraction(q), alpha))
        p_int = int(Fraction(p_val)) if is_rational(p_val) else None
        if p_int is None:
            continue
        cur = by_q.get(q)
        if cur is None or exact_cmp(exact_abs(pt[0]), cur[1]) < 0:
            by_q[q] = ((p_int, q), exact_abs(pt[0]))
    return [by_q[q][0] for q in sorted(by_q)]


def shift_canonical(seq: BiSeq) -> BiSeq:
    """Lexicographically minimal rotation of a purely periodic sequence."""
    if not seq.purely_periodic:
        raise DomainError("shift canonicalization needs a purely periodic sequence")
    period = seq.right.period
    rotations = [period[i:] + period[:i] for i in range(len(period))]
    return BiSeq.from_period(min(rotations))
