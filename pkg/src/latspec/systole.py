"""Log-systole functions W(t) and W2(t), their extrema, and the four-spectra
evaluation for periodic index sequences.

W(t) = ln sys(g_t L) is piecewise linear with slopes +-1; its local minima
sit at pivots and its local maxima between consecutive pivots.  Evaluation
walks the pivot chain once per window (O(|t|) pivots, O(1) state per step)
and then reduces per-pivot log-coordinates.

The ell^2 Mordell constant kappa_2 = exp(sup W2) is certified two ways: a
grid bound via 1-Lipschitz continuity, and an exact crossing analysis whose
candidate values kappa_2^4 live in the lattice's coordinate field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .cfrac import INF, BiSeq, tails_at
from .exact import (
    DomainError,
    ExactNum,
    ValidatedInterval,
    as_exact,
    exact_abs,
    exact_add,
    exact_cmp,
    exact_div,
    exact_mul,
    exact_sign,
    exact_sub,
    float_of,
    to_interval,
)
from .lattice import Lattice2D, PivotChain, pivot_walk


def _logf(x: ExactNum) -> float:
    """float ln of a positive exact number (big fractions handled safely)."""
    if isinstance(x, Fraction):
        if x <= 0:
            return -math.inf
        return math.log(x.numerator) - math.log(x.denominator)
    f = float_of(x)
    return math.log(f) if f > 0 else -math.inf


@dataclass
class WPivot:
    """Per-pivot data for log-systole evaluation: log true coordinates."""

    lx: float  # ln of true |x| (may be -inf on the y axis)
    ly: float  # ln of true y (may be -inf on the x axis)
    x_sq: ExactNum  # raw x^2 (exact)
    y_sq: ExactNum  # raw y^2 (exact)


def _window_chain(lat: Lattice2D, t_lo: float, t_hi: float) -> PivotChain:
    s = float_of(lat.scale_sq)
    sq = math.sqrt(s)
    margin = 4.0
    x_max = Fraction(math.exp(-t_lo) * sq * margin).limit_denominator(10**12) + 1
    y_max = Fraction(math.exp(t_hi) * sq * margin).limit_denominator(10**12) + 1
    return pivot_walk(lat, x_max, y_max)


def _undominated(pivots: List[Tuple]) -> List[Tuple]:
    """Drop pivots dominated in both |x| and y (forced same-height companions
    never achieve the systole).  Input is y-ascending; output has strictly
    decreasing |x|."""
    out = []
    for p in pivots:
        ax = exact_abs(p[0])
        while out and exact_cmp(out[-1][1], p[1]) == 0 and exact_cmp(exact_abs(out[-1][0]), ax) >= 0:
            out.pop()
        if out and exact_cmp(exact_abs(out[-1][0]), ax) <= 0:
            continue
        out.append(p)
    return out


def _chain_wpivots(chain: PivotChain, scale_sq: ExactNum) -> List[WPivot]:
    half_ln_s = 0.5 * _logf(scale_sq)
    out = []
    for (x, y) in _undominated(chain.pivots):
        out.append(
            WPivot(
                lx=_logf(exact_abs(x)) - half_ln_s,
                ly=_logf(y) - half_ln_s,
                x_sq=exact_mul(x, x),
                y_sq=exact_mul(y, y),
            )
        )
    return out


def w_pivot_data(lat: Lattice2D, t_lo: float, t_hi: float) -> List[WPivot]:
    chain = _window_chain(lat, t_lo, t_hi)
    return _chain_wpivots(chain, lat.scale_sq)


def _complete_chain(lat: Lattice2D):
    """Full pivot chain of a finite-type lattice (terminated on both axes),
    or None when a growth cap is hit."""
    bound = Fraction(16)
    for _ in range(40):
        chain = pivot_walk(lat, bound, bound)
        if chain.hit_x_axis and chain.hit_y_axis:
            return chain
        bound *= 16
    return None


def w_value(pivots: List[WPivot], t: float) -> float:
    """W(t) = min over pivots of max(t + lx, -t + ly)."""
    return min(max(t + p.lx, -t + p.ly) for p in pivots)


def w2_value(pivots: List[WPivot], t: float) -> float:
    """W2(t) = ln of the minimal ell^2 pivot norm of g_t L."""
    best = math.inf
    for p in pivots:
        # ln sqrt(e^{2t} x^2 + e^{-2t} y^2), via the log data to stay stable
        a, b = 2 * (t + p.lx), 2 * (-t + p.ly)
        hi, lo = max(a, b), min(a, b)
        if hi == -math.inf:
            continue
        v = 0.5 * hi if lo == -math.inf else 0.5 * (hi + math.log1p(math.exp(lo - hi)))
        best = min(best, v)
    return best


def log_systole(lat: Lattice2D, t: float) -> float:
    """W(t; L), computed by a pivot walk sized to the requested t."""
    return w_value(w_pivot_data(lat, t, t), t)


def l2_log_systole(lat: Lattice2D, t: float) -> float:
    """W2(t; L) = ln min ell^2 norm over pivots of g_t L."""
    return w2_value(w_pivot_data(lat, t, t), t)


def sys_linf(lat: Lattice2D):
    """Systole min ||P||_inf over nonzero points; exact when scale_sq = 1,
    otherwise a validated enclosure."""
    chain = _window_chain(lat, 0.0, 0.0)
    best = None
    for (x, y) in chain.pivots:
        m = exact_abs(x) if exact_cmp(exact_abs(x), y) >= 0 else y
        if best is None or exact_cmp(m, best) < 0:
            best = m
    if exact_cmp(lat.scale_sq, Fraction(1)) == 0:
        return best
    return to_interval(best) / to_interval(lat.scale_sq).sqrt()


# ---------------------------------------------------------------------------
# extrema and periodic spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogExtremum:
    """A value W = -1/2 ln(arg) with the argument kept exact."""

    arg: ExactNum  # exp(-2W), exact

    @property
    def value(self) -> float:
        return -0.5 * _logf(self.arg)

    def exp_neg_2w(self) -> ExactNum:
        return self.arg


def local_extrema(seq: BiSeq, k: int) -> Tuple[Optional[LogExtremum], LogExtremum]:
    """(min at the pivot A_k, max between A_{k-1} and A_k).

    min = -1/2 ln(a_k + beta_k + alpha_k); max = -1/2 ln(1 + beta_k alpha_{k-1}).
    The min is undefined (None) when a_k is the infinity marker; the max
    survives through the zero-tail convention.
    """
    pair_k = tails_at(seq, k)
    alpha_km1 = tails_at(seq, k - 1).alpha if seq.defined(k - 1) else None
    if alpha_km1 is None:
        # a_{k-1} is beyond an infinity marker; alpha_{k-1} still defined via
        # the tail from k: alpha_{k-1} = 1/(a_k + alpha_k) when a_k finite
        a_k = seq.term(k)
        alpha_km1 = exact_div(Fraction(1), exact_add(Fraction(int(a_k)), pair_k.alpha))
    a_k = seq.term(k)
    maximum = LogExtremum(exact_add(Fraction(1), exact_mul(pair_k.beta, alpha_km1)))
    if a_k == INF:
        return None, maximum
    minimum = LogExtremum(exact_add(Fraction(int(a_k)), exact_add(pair_k.alpha, pair_k.beta)))
    return minimum, maximum


SPECTRUM_KINDS = ("Lagrange", "Markov", "Dirichlet", "MG2")


@dataclass(frozen=True)
class SpectrumValue:
    value: ExactNum
    offset: int
    kind: str

    @property
    def decimal(self) -> float:
        return float_of(self.value)


def spectrum_value_periodic(seq: BiSeq, which: str) -> SpectrumValue:
    """Exact spectrum value of a purely periodic bi-infinite sequence.

    Lagrange = Markov = max_k (a_k + alpha_k + beta_k);
    Dirichlet = MG2   = max_k 1/(1 + beta_k alpha_{k-1});
    the smallest achieving non-negative offset is reported.
    """
    if which not in SPECTRUM_KINDS:
        raise DomainError(f"unknown spectrum kind {which!r}")
    if not seq.purely_periodic:
        raise DomainError("periodic spectrum evaluation needs a purely periodic sequence")
    m = seq.period_length()
    best = None
    best_k = None
    for k in range(m):
        pair = tails_at(seq, k)
        if which in ("Lagrange", "Markov"):
            val = exact_add(Fraction(int(seq.term(k))), exact_add(pair.alpha, pair.beta))
        else:
            alpha_prev = tails_at(seq, k - 1).alpha
            val = exact_div(Fraction(1), exact_add(Fraction(1), exact_mul(pair.beta, alpha_prev)))
        if best is None or exact_cmp(val, best) > 0:
            best, best_k = val, k
    return SpectrumValue(value=best, offset=best_k, kind=which)


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Breakpoint:
    t: float
    w: float
    kind: str  # 'min' | 'max'


@dataclass
class SystoleProfile:
    breakpoints: List[Breakpoint]

    def value(self, t: float) -> float:
        """Piecewise-linear interpolation (slopes +-1 between breakpoints)."""
        bps = self.breakpoints
        for a, b in zip(bps, bps[1:]):
            if a.t <= t <= b.t:
                slope = (b.w - a.w) / (b.t - a.t)
                return a.w + slope * (t - a.t)
        raise DomainError("t outside the profiled window")


def systole_profile(lat: Lattice2D, t_lo: float, t_hi: float) -> SystoleProfile:
    pivots = w_pivot_data(lat, t_lo, t_hi)
    bps = []
    for i, p in enumerate(pivots):
        if p.lx > -math.inf and p.ly > -math.inf:
            bps.append(Breakpoint(t=0.5 * (p.ly - p.lx), w=0.5 * (p.lx + p.ly), kind="min"))
        if i + 1 < len(pivots):
            q = pivots[i + 1]
            if p.lx > -math.inf and q.ly > -math.inf:
                bps.append(Breakpoint(t=0.5 * (q.ly - p.lx), w=0.5 * (p.lx + q.ly), kind="max"))
    bps.sort(key=lambda b: b.t)
    return SystoleProfile(breakpoints=bps)


def profile_rows(lat: Lattice2D, t_lo: float, t_hi: float, step: float) -> List[Tuple[float, float, float]]:
    """(t, W, W2) rows over a uniform grid, for CSV export."""
    if step <= 0:
        raise DomainError("step must be positive")
    pivots = w_pivot_data(lat, t_lo, t_hi)
    rows = []
    n = int(math.floor((t_hi - t_lo) / step + 1e-9)) + 1
    for i in range(n):
        t = t_lo + i * step
        rows.append((t, w_value(pivots, t), w2_value(pivots, t)))
    return rows


# ---------------------------------------------------------------------------
# ell^2 Mordell constant
# ---------------------------------------------------------------------------


@dataclass
class Kappa2Result:
    lower: float
    upper: float
    fourth_power: Optional[ExactNum]  # exact kappa_2^4 when available
    boundary_flag: bool  # True when the window may be too small

    @property
    def value(self) -> float:
        if self.fourth_power is not None:
            return float_of(self.fourth_power) ** 0.25
        return 0.5 * (self.lower + self.upper)


def _crossing_candidates(pivots: List[WPivot], scale_sq: ExactNum, u_sq_range=None):
    """Exact sup of min over the pivot norm curves n_i(u) = x_i^2 u + y_i^2/u.

    Every local maximum of the lower envelope is a crossing of two curves;
    at the crossing U = u^2 is a field element and so is the squared value,
    making kappa_2^4 exactly comparable.  When the pivot set only covers a
    window (non-complete chains), crossings outside ``u_sq_range`` are
    boundary artifacts and are skipped.  Returns (kappa4, at_boundary_pair).
    """
    best = None
    best_pair = None
    n = len(pivots)
    for i in range(n):
        xi2, yi2 = pivots[i].x_sq, pivots[i].y_sq
        for j in range(i + 1, n):
            xj2, yj2 = pivots[j].x_sq, pivots[j].y_sq
            dx = exact_sub(xi2, xj2)
            dy = exact_sub(yj2, yi2)
            if exact_sign(dx) == 0 or exact_sign(dy) == 0:
                continue
            U = exact_div(dy, dx)  # u^2 at the crossing
            if exact_sign(U) <= 0:
                continue
            if u_sq_range is not None:
                uf = float_of(U)
                if not (u_sq_range[0] <= uf <= u_sq_range[1]):
                    continue
            # value on the lower envelope? compare every curve at U
            # n_k(u)*u = x_k^2 U + y_k^2; compare against n_i(u)*u
            base = exact_add(exact_mul(xi2, U), yi2)
            dominated = False
            for k in range(n):
                if k in (i, j):
                    continue
                nk = exact_add(exact_mul(pivots[k].x_sq, U), pivots[k].y_sq)
                if exact_cmp(nk, base) < 0:
                    dominated = True
                    break
            if dominated:
                continue
            # v^2 = x_i^4 U + y_i^4 / U + 2 x_i^2 y_i^2
            v2 = exact_add(
                exact_add(exact_mul(exact_mul(xi2, xi2), U), exact_div(exact_mul(yi2, yi2), U)),
                exact_mul(Fraction(2), exact_mul(xi2, yi2)),
            )
            kappa4 = exact_div(v2, exact_mul(scale_sq, scale_sq))
            if best is None or exact_cmp(kappa4, best) > 0:
                best = kappa4
                best_pair = (i, j)
    boundary = best_pair is not None and (0 in best_pair or n - 1 in best_pair)
    return best, boundary


def mordell_l2(
    lat: Lattice2D,
    t_window: Optional[Tuple[float, float]] = None,
    step: float = 1e-4,
) -> Kappa2Result:
    """Certified kappa_2(L) = exp(sup_t W2(t)).

    Grid maxima with the 1-Lipschitz bound give [max, max + step].  For
    finite-type lattices the whole pivot chain (axis to axis) is walked, so
    the crossing analysis pins the value exactly (kappa_2^4 in the
    coordinate field); otherwise crossings are restricted to the window and
    the boundary flag reports possible truncation.
    """
    if step <= 0:
        raise DomainError("step must be positive")
    if t_window is None:
        t_window = (-10.0, 10.0)
    t_lo, t_hi = t_window

    complete = False
    if lat.classify() == "finite":
        chain = _complete_chain(lat)
        if chain is not None:
            complete = True
            pivots = _chain_wpivots(chain, lat.scale_sq)
    if not complete:
        pivots = w_pivot_data(lat, t_lo, t_hi)
    u_range = None if complete else (math.exp(4 * t_lo), math.exp(4 * t_hi))
    kappa4, boundary = _crossing_candidates(pivots, lat.scale_sq, u_sq_range=u_range)

    lo = t_lo
    grid_best = -math.inf
    while lo <= t_hi + 1e-12:
        grid_best = max(grid_best, w2_value(pivots, lo))
        lo += step
    lower = math.exp(grid_best)
    upper = math.exp(grid_best + step)
    rising = max(w2_value(pivots, t_lo), w2_value(pivots, t_hi)) >= grid_best - step
    flag = (boundary or rising) and not complete
    return Kappa2Result(lower=lower, upper=upper, fourth_power=kappa4, boundary_flag=flag)
