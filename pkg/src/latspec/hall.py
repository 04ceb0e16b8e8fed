"""Cantor-set constructions, aperture ratios, and the constructive
nested-rectangle solver for level sets over products of Cantor sets.

A Cantor set is presented as a binary subdivision tree: every node is an
interval with exact endpoints whose two children share its endpoints and
leave a positive middle gap.  The solver descends through the product of
two such trees, following the proof-style case analysis (corner squares
Q1..Q6 over the candidate halves V1/V2) while re-verifying every containment
it relies on; any broken check refuses certification rather than returning
an unverified witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from .cfrac import OneSidedSeq, eval_periodic
from .exact import (
    DomainError,
    ExactNum,
    PrecisionExhausted,
    as_exact,
    exact_add,
    exact_cmp,
    exact_div,
    exact_mul,
    exact_neg,
    exact_sign,
    exact_sub,
    float_of,
    surd_make,
)


class CertificationRefused(Exception):
    """A containment or derivative-ratio check failed at a visited cell."""


@dataclass(frozen=True)
class CantorNode:
    lo: ExactNum
    hi: ExactNum
    level: int
    payload: object = None
    lo_desc: object = None  # construction-specific endpoint description
    hi_desc: object = None

    @property
    def width(self) -> ExactNum:
        return exact_sub(self.hi, self.lo)

    def contains_value(self, x) -> bool:
        return exact_cmp(self.lo, x) <= 0 and exact_cmp(x, self.hi) <= 0


class CantorSet:
    """Interface: root() and split(node); plus a declared aperture bound.

    ``affine_equivariant`` declares that the subdivision rule commutes with
    affine maps of the interval (every subtree is an affine copy of the root
    subtree); the aperture scan exploits this to collapse congruent nodes.
    """

    name: str = "cantor"
    aperture_bound: ExactNum = Fraction(1)
    affine_equivariant: bool = False

    def root(self) -> CantorNode:
        raise NotImplementedError

    def split(self, node: CantorNode) -> Tuple[CantorNode, CantorNode]:
        raise NotImplementedError


class TernaryCantor(CantorSet):
    """Middle-thirds set on [0, 1]; every split has ratio profile (1, 1, 1)."""

    name = "ternary"
    aperture_bound = Fraction(1)
    affine_equivariant = True

    def root(self) -> CantorNode:
        return CantorNode(Fraction(0), Fraction(1), 0, payload=(0, 0))

    def split(self, node: CantorNode) -> Tuple[CantorNode, CantorNode]:
        m, k = node.payload
        lo, hi = node.lo, node.hi
        w = exact_div(exact_sub(hi, lo), Fraction(3))
        left = CantorNode(lo, lo + w, node.level + 1, payload=(3 * m, k + 1))
        right = CantorNode(exact_sub(hi, w), hi, node.level + 1, payload=(3 * m + 2, k + 1))
        return left, right


def ternary_cantor() -> TernaryCantor:
    return TernaryCantor()


# ---------------------------------------------------------------------------
# the set F(4) of continued fractions with partial quotients in {1,2,3,4}
# ---------------------------------------------------------------------------

T1 = surd_make(-1, 1, 2, 2)  # [0; 4,1,4,1,...] = (sqrt2 - 1)/2 = min F(4)
T2 = surd_make(-2, 2, 2, 1)  # [0; 1,4,1,4,...] = 2 sqrt2 - 2   = max F(4)

TAIL_41 = (4, 1)
TAIL_14 = (1, 4)

# Hall's bound on the aperture ratio of F(4): (10 sqrt2 + 2)/21
F4_APERTURE_BOUND = surd_make(2, 10, 2, 21)


def _convergents(w: tuple) -> Tuple[int, int, int, int]:
    p0, q0, p1, q1 = 1, 0, 0, 1
    for t in w:
        p0, q0, p1, q1 = p1, q1, t * p1 + p0, t * q1 + q0
    return p1, q1, p0, q0


def _cyl_value(w: tuple, t: ExactNum) -> ExactNum:
    """Value of [0; w, continuation-with-value-t]."""
    p, q, pp, qq = _convergents(w)
    return exact_div(Fraction(p) + Fraction(pp) * t, Fraction(q) + Fraction(qq) * t)


def _cyl_interval(w: tuple):
    """(lo, hi, lo_desc, hi_desc) of the F(4) cylinder with prefix w."""
    a, b = _cyl_value(w, T1), _cyl_value(w, T2)
    if len(w) % 2 == 0:  # value increasing in the tail
        return a, b, (w, TAIL_41), (w, TAIL_14)
    return b, a, (w, TAIL_14), (w, TAIL_41)


class F4Cantor(CantorSet):
    """Binary presentation of F(4) on [t1, t2].

    Each continued-fraction cylinder splits in three stages, peeling the
    widest-and-farthest child off first: the first-term-1 cylinder separates
    from {2,3,4}, then 2 from {3,4}, then 3 from 4.  This schedule keeps
    every gap-to-piece ratio at or below (10 sqrt2 + 2)/21, with equality at
    the 3|4 stage.  All endpoints are exact elements of Q(sqrt 2) and carry
    the eventually-periodic expansions realizing them.
    """

    name = "F4"
    aperture_bound = F4_APERTURE_BOUND
    affine_equivariant = False

    def root(self) -> CantorNode:
        lo, hi, ld, hd = _cyl_interval(())
        return CantorNode(lo, hi, 0, payload=("cyl", ()), lo_desc=ld, hi_desc=hd)

    def _part_node(self, w: tuple, ks: tuple, level: int) -> CantorNode:
        if len(ks) == 1:
            lo, hi, ld, hd = _cyl_interval(w + (ks[0],))
            return CantorNode(lo, hi, level, payload=("cyl", w + (ks[0],)), lo_desc=ld, hi_desc=hd)
        # cylinder value decreases in the first term at even prefix parity
        k_lo, k_hi = (max(ks), min(ks)) if len(w) % 2 == 0 else (min(ks), max(ks))
        lo, _, ld, _ = _cyl_interval(w + (k_lo,))
        _, hi, _, hd = _cyl_interval(w + (k_hi,))
        return CantorNode(lo, hi, level, payload=("grp", w, ks), lo_desc=ld, hi_desc=hd)

    def split(self, node: CantorNode) -> Tuple[CantorNode, CantorNode]:
        kind = node.payload[0]
        if kind == "cyl":
            w = node.payload[1]
            ks = (1, 2, 3, 4)
        elif kind == "grp":
            _, w, ks = node.payload
        else:
            raise DomainError(f"unknown F4 node payload {node.payload!r}")
        a = self._part_node(w, (ks[0],), node.level + 1)
        b = self._part_node(w, tuple(ks[1:]), node.level + 1)
        # order children by value: the 1-cylinder sits above the rest at even
        # parity and below at odd parity
        return (b, a) if len(w) % 2 == 0 else (a, b)


def f4_cantor() -> F4Cantor:
    return F4Cantor()


def f4_member_from_desc(desc) -> OneSidedSeq:
    """The eventually periodic F(4) member realizing an endpoint descriptor."""
    prefix, tail = desc
    return OneSidedSeq(tuple(prefix), tuple(tail))


class SubtreeCantor(CantorSet):
    """A Cantor set rooted at an interior node of another construction."""

    def __init__(self, base: CantorSet, node: CantorNode):
        self.base = base
        self._root = node
        self.name = f"{base.name}/subtree@{node.level}"
        self.aperture_bound = base.aperture_bound
        self.affine_equivariant = base.affine_equivariant

    def root(self) -> CantorNode:
        return self._root

    def split(self, node: CantorNode) -> Tuple[CantorNode, CantorNode]:
        return self.base.split(node)


# ---------------------------------------------------------------------------
# aperture ratio
# ---------------------------------------------------------------------------


def split_ratios(left: CantorNode, right: CantorNode) -> ExactNum:
    """max(gap/left, gap/right) for one subdivision, exactly."""
    gap = exact_sub(right.lo, left.hi)
    wl, wr = left.width, right.width
    if exact_sign(gap) <= 0 or exact_sign(wl) <= 0 or exact_sign(wr) <= 0:
        raise DomainError("degenerate subdivision (empty piece or gap)")
    r1, r2 = exact_div(gap, wl), exact_div(gap, wr)
    return r1 if exact_cmp(r1, r2) >= 0 else r2


def aperture_ratio(cs: CantorSet, depth: int) -> ExactNum:
    """Supremum of the subdivision ratios over all levels up to ``depth``.

    For affine-equivariant rules one representative per level carries all
    congruence classes, so the scan is linear in depth; otherwise every node
    is visited.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    best = None
    frontier = [cs.root()]
    for _ in range(depth):
        nxt = []
        for node in frontier:
            left, right = cs.split(node)
            r = split_ratios(left, right)
            if best is None or exact_cmp(r, best) > 0:
                best = r
            nxt.extend((left, right))
        frontier = nxt[:2] if cs.affine_equivariant else nxt
    return best


def membership_depth(cs: CantorSet, lo: ExactNum, hi: ExactNum, depth: int) -> int:
    """Levels survived by the cell [lo, hi] under an independent root walk."""
    node = cs.root()
    if not (node.contains_value(lo) and node.contains_value(hi)):
        return -1
    for lvl in range(depth):
        left, right = cs.split(node)
        if exact_cmp(hi, left.hi) <= 0 and exact_cmp(lo, left.lo) >= 0:
            node = left
        elif exact_cmp(lo, right.lo) >= 0 and exact_cmp(hi, right.hi) <= 0:
            node = right
        else:
            return lvl
    return depth


# ---------------------------------------------------------------------------
# the solver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionRecord:
    """Bivariate g, strictly increasing in both arguments on the root box,
    with certified positive partial-derivative bounds per cell.

    ``ratio_bounds``, when supplied, gives sharp exact bounds of
    (dg/dx)/(dg/dy) over a cell; common factors of the two partials cancel
    there, which the interval quotient of ``deriv_bounds`` cannot express.
    """

    name: str
    evaluate: Callable[[ExactNum, ExactNum], ExactNum]
    deriv_bounds: Callable[[ExactNum, ExactNum, ExactNum, ExactNum], tuple]
    # deriv_bounds(xlo, xhi, ylo, yhi) -> ((ga_lo, ga_hi), (gb_lo, gb_hi))
    ratio_bounds: Optional[Callable[[ExactNum, ExactNum, ExactNum, ExactNum], tuple]] = None


@dataclass
class SolverStep:
    axis: str  # 'x' | 'y'
    branch: str  # 'V1' | 'V2'
    square: str  # which corner square certified the choice
    area: float = 0.0  # cell area after the step (audit of descent progress)


@dataclass
class SolverWitness:
    x_node: CantorNode
    y_node: CantorNode
    h: ExactNum
    residual_bound: ExactNum  # g oscillation over the final cell
    steps: List[SolverStep]

    @property
    def depth(self) -> int:
        return min(self.x_node.level, self.y_node.level)

    @property
    def alpha(self) -> ExactNum:
        return self.x_node.lo

    @property
    def beta(self) -> ExactNum:
        return self.y_node.lo

    def as_json(self) -> dict:
        from .exact import exact_to_json

        return {
            "h": exact_to_json(self.h),
            "alpha": exact_to_json(self.alpha),
            "beta": exact_to_json(self.beta),
            "depth": self.depth,
            "residual": float_of(self.residual_bound),
        }


def _ratio_interval(g: FunctionRecord, cell, scale: ExactNum) -> tuple:
    """Bounds of the *normalized* derivative ratio over the cell.

    The theorem's hypotheses live in coordinates where both root intervals
    are [0,1]; that rescales the raw ratio by scale = root_width_x/root_width_y.
    """
    if g.ratio_bounds is not None:
        rlo, rhi = g.ratio_bounds(*cell)
    else:
        (alo, ahi), (blo, bhi) = g.deriv_bounds(*cell)
        if exact_sign(blo) <= 0:
            raise CertificationRefused(f"{g.name}: nonpositive derivative bound on cell {cell}")
        rlo, rhi = exact_div(alo, bhi), exact_div(ahi, blo)
    return exact_mul(scale, rlo), exact_mul(scale, rhi)


def _ratio_check(g: FunctionRecord, cell, r: ExactNum, scale: ExactNum) -> None:
    (alo, _), (blo, _) = g.deriv_bounds(*cell)
    if exact_sign(alo) <= 0 or exact_sign(blo) <= 0:
        raise CertificationRefused(f"{g.name}: nonpositive derivative bound on cell {cell}")
    rlo, rhi = _ratio_interval(g, cell, scale)
    inv_r = exact_div(Fraction(1), r)
    if exact_cmp(rlo, r) < 0 or exact_cmp(rhi, inv_r) > 0:
        raise CertificationRefused(
            f"{g.name}: normalized derivative ratio [{float_of(rlo):.6f}, {float_of(rhi):.6f}] "
            f"outside [{float_of(r):.6f}, {float_of(inv_r):.6f}]"
        )


def interval_solver(
    g: FunctionRecord,
    C: CantorSet,
    D: CantorSet,
    h,
    tol,
    min_level: int = 0,
    max_steps: int = 400,
) -> SolverWitness:
    """Descend nested rectangles until the cell's g-oscillation is below tol
    (and both tree levels reach min_level); returns the witness cell.

    Every step checks the derivative-ratio condition on the current cell and
    re-verifies that the level set still crosses the chosen half; any failed
    check raises CertificationRefused.
    """
    h = as_exact(h)
    tol = as_exact(tol)
    X, Y = C.root(), D.root()
    WX, WY = X.width, Y.width  # per-axis normalization of all geometry below
    scale = exact_div(WX, WY)
    ge = g.evaluate
    if exact_cmp(ge(X.lo, Y.lo), h) > 0 or exact_cmp(h, ge(X.hi, Y.hi)) > 0:
        raise DomainError("h outside [g(min,min), g(max,max)]")
    r = C.aperture_bound if exact_cmp(C.aperture_bound, D.aperture_bound) >= 0 else D.aperture_bound
    if exact_cmp(r, Fraction(1)) > 0:
        raise CertificationRefused("aperture ratio above 1: the ratio window is empty")

    steps: List[SolverStep] = []
    for _ in range(max_steps):
        osc = exact_sub(ge(X.hi, Y.hi), ge(X.lo, Y.lo))
        if exact_cmp(osc, tol) <= 0 and X.level >= min_level and Y.level >= min_level:
            return SolverWitness(X, Y, h, osc, steps)
        _ratio_check(g, (X.lo, X.hi, Y.lo, Y.hi), r, scale)
        # split the normalized-wider side
        split_x = exact_cmp(exact_mul(X.width, WY), exact_mul(Y.width, WX)) >= 0
        if split_x:
            L, R = C.split(X)
            branch, square = _choose_half(ge, h, X, Y, L, R, WX, WY)
            X = L if branch == "V1" else R
        else:
            L, R = D.split(Y)
            branch, square = _choose_half(lambda u, v: ge(v, u), h, Y, X, L, R, WY, WX)
            Y = L if branch == "V1" else R
        # independent re-verification of the invariant on the chosen cell
        if exact_cmp(ge(X.lo, Y.lo), h) > 0 or exact_cmp(h, ge(X.hi, Y.hi)) > 0:
            raise CertificationRefused("level set left the chosen cell (invariant broken)")
        steps.append(
            SolverStep(
                axis="x" if split_x else "y",
                branch=branch,
                square=square,
                area=float_of(X.width) * float_of(Y.width),
            )
        )
    raise PrecisionExhausted(f"solver did not reach tol within {max_steps} steps")


def _minw(a, b):
    return a if exact_cmp(a, b) <= 0 else b


def _choose_half(ge, h, P: CantorNode, Q: CantorNode, L: CantorNode, R: CantorNode, SP, SQ):
    """Case analysis choosing V1 = L x Q or V2 = R x Q.

    ``ge(p, q)`` evaluates g with p on the split axis; P is split into L, R
    and Q is the other side, shorter or equal after normalizing each axis by
    its root width (SP for the split axis, SQ for the other).  Squares are
    squares in normalized units, so an extent of e spans e*SP along the
    split axis and e*SQ along the other.  The corner-square chain of the
    existence proof reduces to ordered interval tests on exact corner
    values; the caller re-verifies the final containment, so a wrong branch
    can never silently escape.
    """
    a, d = P.lo, P.hi
    ap, dp = Q.lo, Q.hi
    b, c = L.hi, R.lo
    e = exact_div(Q.width, SQ)  # normalized; = min of the two normalized widths
    nl = exact_div(L.width, SP)
    nr = exact_div(R.width, SP)
    e1 = _minw(nl, e)
    e2 = _minw(nr, e)

    def gx(base, extent):  # point on the split axis
        return exact_add(base, exact_mul(extent, SP))

    def gy(base, extent):
        return exact_add(base, exact_mul(extent, SQ))

    # square hypotheses: bottom-left [a, a + e*SP] x [ap, dp], and mirrored
    low = exact_cmp(h, ge(gx(a, e), dp)) <= 0
    high = exact_cmp(h, ge(gx(d, exact_sub(Fraction(0), e)), ap)) >= 0

    if low:
        if exact_cmp(nl, e) >= 0:
            return "V1", "Q1"
        if exact_cmp(h, ge(gx(a, e1), gy(ap, e1))) <= 0:
            return "V1", "Q3"
        if exact_cmp(h, ge(gx(c, e2), gy(ap, e2))) <= 0:
            return "V2", "Q5"
        if exact_cmp(h, ge(b, dp)) <= 0:
            return "V1", "Q4"
        return "V2", "Q6"
    if high:
        if exact_cmp(nr, e) >= 0:
            return "V2", "Q2"
        if exact_cmp(h, ge(gx(d, exact_sub(Fraction(0), e2)), gy(dp, exact_sub(Fraction(0), e2)))) >= 0:
            return "V2", "Q6"
        if exact_cmp(h, ge(gx(b, exact_sub(Fraction(0), e1)), gy(dp, exact_sub(Fraction(0), e1)))) >= 0:
            return "V1", "Q4"
        if exact_cmp(h, ge(c, ap)) >= 0:
            return "V2", "Q5"
        return "V1", "Q3"
    raise CertificationRefused("corner-square hypothesis failed at a visited cell")


# ---------------------------------------------------------------------------
# certification over a whole interval
# ---------------------------------------------------------------------------


@dataclass
class CertificationReport:
    ratio_bracket: Tuple[float, float]
    aperture_C: float
    aperture_D: float
    witnesses: List[SolverWitness]
    h_lo: ExactNum
    h_hi: ExactNum

    def as_json(self) -> dict:
        from .exact import exact_to_json

        return {
            "ratio_bracket": list(self.ratio_bracket),
            "aperture_C": self.aperture_C,
            "aperture_D": self.aperture_D,
            "range": [exact_to_json(self.h_lo), exact_to_json(self.h_hi)],
            "witnesses": [w.as_json() for w in self.witnesses],
        }


def certify_hall_interval(
    g: FunctionRecord,
    C: CantorSet,
    D: CantorSet,
    grid: int = 12,
    tol=Fraction(1, 10**9),
    min_level: int = 0,
) -> CertificationReport:
    """Check the ratio condition on a grid of cells, then solve grid-many
    level values spanning [g(min,min), g(max,max)]."""
    if grid < 2:
        raise DomainError("grid must be >= 2")
    X, Y = C.root(), D.root()
    scale = exact_div(X.width, Y.width)
    r = C.aperture_bound if exact_cmp(C.aperture_bound, D.aperture_bound) >= 0 else D.aperture_bound
    rlo_all, rhi_all = None, None
    for i in range(grid):
        for j in range(grid):
            xlo = X.lo + exact_mul(Fraction(i, grid), X.width)
            xhi = X.lo + exact_mul(Fraction(i + 1, grid), X.width)
            ylo = Y.lo + exact_mul(Fraction(j, grid), Y.width)
            yhi = Y.lo + exact_mul(Fraction(j + 1, grid), Y.width)
            _ratio_check(g, (xlo, xhi, ylo, yhi), r, scale)
            lo, hi = _ratio_interval(g, (xlo, xhi, ylo, yhi), scale)
            rlo_all = lo if rlo_all is None or exact_cmp(lo, rlo_all) < 0 else rlo_all
            rhi_all = hi if rhi_all is None or exact_cmp(hi, rhi_all) > 0 else rhi_all
    glo, ghi = g.evaluate(X.lo, Y.lo), g.evaluate(X.hi, Y.hi)
    witnesses = []
    for i in range(grid + 1):
        h = glo + exact_mul(Fraction(i, grid), exact_sub(ghi, glo))
        witnesses.append(interval_solver(g, C, D, h, tol, min_level=min_level))
    return CertificationReport(
        ratio_bracket=(float_of(rlo_all), float_of(rhi_all)),
        aperture_C=float_of(C.aperture_bound),
        aperture_D=float_of(D.aperture_bound),
        witnesses=witnesses,
        h_lo=glo,
        h_hi=ghi,
    )


def sum_record() -> FunctionRecord:
    """g(x, y) = x + y with constant unit derivatives."""
    one = (Fraction(1), Fraction(1))
    return FunctionRecord("sum", lambda x, y: x + y, lambda *cell: (one, one))
