"""Exact rational / quadratic-surd arithmetic and validated interval arithmetic.

Every number that flows through the library is one of:

* ``Fraction``            -- exact rational,
* ``QuadraticSurd``       -- exact (p + q*sqrt(d)) / r with d squarefree,
* ``ValidatedInterval``   -- a two-sided enclosure with exact endpoints.

Surds sharing one radicand form a field and all ring operations stay exact.
Operations mixing two radicands fall back to enclosures; comparisons are
still decided exactly (distinct canonical surds are never equal, so interval
refinement terminates).
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union


class PrecisionExhausted(Exception):
    """Raised when an enclosure refinement budget runs out before a decision."""


class DomainError(ValueError):
    """Raised for arguments outside an operation's mathematical domain."""


def precision_bits() -> int:
    """Default enclosure precision, overridable via SPECTRA_PRECISION_BITS."""
    return int(os.environ.get("SPECTRA_PRECISION_BITS", "128"))


# ---------------------------------------------------------------------------
# integer factoring helpers (squarefree extraction for surd canonicalization)
# ---------------------------------------------------------------------------

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        x = rng.randrange(2, n)
        y, c, d = x, rng.randrange(1, n), 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def _factorize(n: int) -> dict:
    """Prime factorization of n >= 1 (trial division + Pollard rho)."""
    factors: dict = {}
    rng = random.Random(0xF4C70)
    stack = []
    for p in _SMALL_PRIMES:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    if n > 1:
        stack.append(n)
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m, rng)
        stack.append(d)
        stack.append(m // d)
    return factors


@lru_cache(maxsize=65536)
def squarefree_decompose(n: int) -> tuple:
    """Write n >= 0 as s*s*d with d squarefree; returns (s, d)."""
    if n < 0:
        raise DomainError("negative radicand")
    if n in (0, 1):
        return 1, n
    s, d = 1, 1
    for p, e in _factorize(n).items():
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, d


# ---------------------------------------------------------------------------
# quadratic surds
# ---------------------------------------------------------------------------

ExactNum = Union[int, Fraction, "QuadraticSurd"]


@dataclass(frozen=True)
class QuadraticSurd:
    """Canonical (p + q*sqrt(d)) / r with d squarefree > 1, q != 0, r > 0,
    gcd(p, q, r) = 1.  Construct via :func:`surd_make`; the raw constructor
    trusts its arguments."""

    p: int
    q: int
    d: int
    r: int

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.p, -self.q, self.d, self.r)

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.p, self.r)

    def __float__(self) -> float:
        return (self.p + self.q * math.sqrt(self.d)) / self.r

    def __repr__(self) -> str:
        return f"({self.p}{self.q:+d}*sqrt({self.d}))/{self.r}"

    def __str__(self) -> str:
        return format_exact(self)

    # arithmetic via the module-level dispatchers; NotImplemented lets
    # ValidatedInterval reflected ops take over in mixed expressions
    def __add__(self, other):
        try:
            return exact_add(self, other)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return exact_add(self, exact_neg(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return exact_add(other, exact_neg(self))
        except TypeError:
            return NotImplemented

    def __mul__(self, other):
        try:
            return exact_mul(self, other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            return exact_div(self, other)
        except TypeError:
            return NotImplemented

    def __rtruediv__(self, other):
        try:
            return exact_div(other, self)
        except TypeError:
            return NotImplemented

    def __neg__(self):
        return QuadraticSurd(-self.p, -self.q, self.d, self.r)

    def __abs__(self):
        return exact_neg(self) if exact_sign(self) < 0 else self

    def __lt__(self, other):
        return exact_cmp(self, other) < 0

    def __le__(self, other):
        return exact_cmp(self, other) <= 0

    def __gt__(self, other):
        return exact_cmp(self, other) > 0

    def __ge__(self, other):
        return exact_cmp(self, other) >= 0

    # equality is structural: canonical form is unique per value
    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            return (self.p, self.q, self.d, self.r) == (other.p, other.q, other.d, other.r)
        if isinstance(other, (int, Fraction)):
            return False  # canonical surds are irrational
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.q, self.d, self.r))


def surd_make(p: int, q: int, d: int, r: int) -> ExactNum:
    """Canonical value of (p + q*sqrt(d)) / r.

    Square factors of d are pulled into q; collapses to a Fraction whenever
    the value is rational.  r = 0 raises, d < 0 raises.
    """
    if r == 0:
        raise ZeroDivisionError("surd with zero denominator")
    if d < 0:
        raise DomainError("negative radicand is unsupported")
    if r < 0:
        p, q, r = -p, -q, -r
    s, d0 = squarefree_decompose(d)
    q *= s
    if d0 <= 1 or q == 0:
        # sqrt collapsed to an integer (d a perfect square, or q*s = 0)
        return Fraction(p + (q if d0 == 1 else 0), r)
    g = math.gcd(math.gcd(abs(p), abs(q)), r)
    return QuadraticSurd(p // g, q // g, d0, r // g)


def as_exact(x) -> ExactNum:
    if isinstance(x, QuadraticSurd):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    raise TypeError(f"not an exact number: {x!r}")


def is_rational(x: ExactNum) -> bool:
    return not isinstance(x, QuadraticSurd)


def exact_neg(x: ExactNum) -> ExactNum:
    x = as_exact(x)
    return -x


def exact_add(a: ExactNum, b: ExactNum) -> ExactNum:
    a, b = as_exact(a), as_exact(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    if isinstance(a, Fraction):
        a, b = b, a
    # a is a surd
    if isinstance(b, Fraction):
        p = a.p * b.denominator + b.numerator * a.r
        return surd_make(p, a.q * b.denominator, a.d, a.r * b.denominator)
    if a.d != b.d:
        raise MixedRadicandError(a, b)
    return surd_make(a.p * b.r + b.p * a.r, a.q * b.r + b.q * a.r, a.d, a.r * b.r)


def exact_sub(a: ExactNum, b: ExactNum) -> ExactNum:
    return exact_add(a, exact_neg(b))


def exact_mul(a: ExactNum, b: ExactNum) -> ExactNum:
    a, b = as_exact(a), as_exact(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    if isinstance(a, Fraction):
        a, b = b, a
    if isinstance(b, Fraction):
        return surd_make(a.p * b.numerator, a.q * b.numerator, a.d, a.r * b.denominator)
    if a.d != b.d:
        raise MixedRadicandError(a, b)
    p = a.p * b.p + a.q * b.q * a.d
    q = a.p * b.q + a.q * b.p
    return surd_make(p, q, a.d, a.r * b.r)


def exact_div(a: ExactNum, b: ExactNum) -> ExactNum:
    a, b = as_exact(a), as_exact(b)
    if exact_sign(b) == 0:
        raise ZeroDivisionError("division by zero exact value")
    if isinstance(b, Fraction):
        return exact_mul(a, Fraction(b.denominator, b.numerator))
    # multiply by the conjugate: 1/b = r*(p - q*sqrt(d)) / (p^2 - q^2 d)
    norm = Fraction(b.p * b.p - b.q * b.q * b.d)  # nonzero: b irrational
    inv = exact_mul(surd_make(b.p, -b.q, b.d, 1), b.r / norm)
    return exact_mul(a, inv)


class MixedRadicandError(ArithmeticError):
    """Two surds over different radicands: exact ring ops unavailable."""

    def __init__(self, a, b):
        super().__init__(f"mixed radicands {a.d} and {b.d}")
        self.operands = (a, b)


def exact_sign(x: ExactNum) -> int:
    x = as_exact(x)
    if isinstance(x, Fraction):
        return (x > 0) - (x < 0)
    # sign of p + q*sqrt(d), r > 0
    if x.p == 0:
        return (x.q > 0) - (x.q < 0)
    sp = 1 if x.p > 0 else -1
    sq = 1 if x.q > 0 else -1
    if sp == sq:
        return sp
    # opposite signs: compare p^2 with q^2 d (equality impossible: d squarefree > 1)
    return sp if x.p * x.p > x.q * x.q * x.d else sq


def exact_cmp(a: ExactNum, b: ExactNum) -> int:
    """Exact three-way comparison; decidable for all exact inputs."""
    a, b = as_exact(a), as_exact(b)
    try:
        return exact_sign(exact_sub(a, b))
    except MixedRadicandError:
        pass
    # distinct radicands: values can never coincide, refine enclosures
    bits = 64
    while bits <= 1 << 14:
        ia = to_interval(a, bits)
        ib = to_interval(b, bits)
        if ia.lo > ib.hi:
            return 1
        if ia.hi < ib.lo:
            return -1
        bits *= 2
    raise PrecisionExhausted("cmp of mixed-radicand surds did not separate")


def exact_abs(x: ExactNum) -> ExactNum:
    return exact_neg(x) if exact_sign(x) < 0 else as_exact(x)


def exact_floor(x: ExactNum) -> int:
    x = as_exact(x)
    if isinstance(x, Fraction):
        return math.floor(x)
    # floor of q*sqrt(d): exact via isqrt (q*sqrt(d) irrational since q != 0)
    if x.q >= 0:
        fq = math.isqrt(x.q * x.q * x.d)
    else:
        fq = -math.isqrt(x.q * x.q * x.d) - 1
    k = (x.p + fq) // x.r
    while exact_cmp(x, k + 1) >= 0:
        k += 1
    while exact_cmp(x, k) < 0:
        k -= 1
    return k


def exact_sqrt(x: ExactNum) -> ExactNum:
    """Exact square root when representable (rational radicand), else raises."""
    x = as_exact(x)
    if exact_sign(x) < 0:
        raise DomainError("sqrt of negative value")
    if isinstance(x, Fraction):
        # sqrt(a/b) = sqrt(a*b) / b
        return surd_make(0, 1, x.numerator * x.denominator, x.denominator)
    raise DomainError("sqrt of a quadratic surd is not itself a quadratic surd")


def format_exact(x: ExactNum) -> str:
    x = as_exact(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    core = f"√{x.d}" if abs(x.q) == 1 else f"{abs(x.q)}√{x.d}"
    sign = "+" if x.q > 0 else "−"
    if x.p == 0:
        s = core if x.q > 0 else f"−{core}"
    else:
        s = f"{x.p}{sign}{core}"
    return f"({s})/{x.r}" if x.r != 1 else (f"({s})" if x.p != 0 else s)


def exact_to_json(x: ExactNum):
    x = as_exact(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return {"p": x.p, "q": x.q, "d": x.d, "r": x.r}


def exact_from_json(obj) -> ExactNum:
    if isinstance(obj, dict):
        return surd_make(int(obj["p"]), int(obj["q"]), int(obj["d"]), int(obj["r"]))
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        if "/" in obj:
            n, d = obj.split("/")
            return Fraction(int(n), int(d))
        return Fraction(obj)  # decimal strings are treated as exact rationals
    raise DomainError(f"cannot parse exact value from {obj!r}")


# ---------------------------------------------------------------------------
# validated intervals
# ---------------------------------------------------------------------------

_INF = math.inf


def _sqrt_frac_bounds(x: Fraction, bits: int) -> tuple:
    """Dyadic-scaled [lo, hi] with lo <= sqrt(x) <= hi, hi - lo <= 2^-bits-ish."""
    if x < 0:
        raise DomainError("sqrt of negative")
    if x == 0:
        return Fraction(0), Fraction(0)
    n, d = x.numerator, x.denominator
    scale = 1 << bits
    # sqrt(n/d) = sqrt(n*d)/d
    root = math.isqrt(n * d * scale * scale)
    lo = Fraction(root, d * scale)
    if lo * lo == x:
        return lo, lo
    return lo, Fraction(root + 1, d * scale)


@dataclass(frozen=True)
class ValidatedInterval:
    """Enclosure [lo, hi] with exact (or +-inf) endpoints; results of every
    operation contain the true result."""

    lo: object
    hi: object

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise DomainError(f"inverted interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x: Fraction) -> "ValidatedInterval":
        return ValidatedInterval(x, x)

    @property
    def width(self):
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, ValidatedInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, QuadraticSurd):
            enc = to_interval(x, precision_bits())
            return self.lo <= enc.lo and enc.hi <= self.hi
        return self.lo <= x <= self.hi

    def __add__(self, other):
        other = _coerce_interval(other)
        return ValidatedInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return ValidatedInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce_interval(other))

    def __rsub__(self, other):
        return _coerce_interval(other) + (-self)

    def __mul__(self, other):
        other = _coerce_interval(other)
        cands = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return ValidatedInterval(min(cands), max(cands))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_interval(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        inv = ValidatedInterval(Fraction(1) / Fraction(other.hi), Fraction(1) / Fraction(other.lo))
        return self * inv

    def __rtruediv__(self, other):
        return _coerce_interval(other) / self

    def sqrt(self, bits: int = None) -> "ValidatedInterval":
        bits = bits or precision_bits()
        lo, _ = _sqrt_frac_bounds(Fraction(max(self.lo, 0)), bits)
        _, hi = _sqrt_frac_bounds(Fraction(self.hi), bits)
        return ValidatedInterval(lo, hi)

    def compress(self, bits: int) -> "ValidatedInterval":
        """Outward rounding of both endpoints to dyadics with 2^-bits grid."""
        scale = 1 << bits
        lo = Fraction(math.floor(self.lo * scale), scale)
        hi = Fraction(math.ceil(self.hi * scale), scale)
        return ValidatedInterval(lo, hi)

    def hull(self, other) -> "ValidatedInterval":
        other = _coerce_interval(other)
        return ValidatedInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def strictly_below(self, other) -> bool:
        other = _coerce_interval(other)
        return self.hi < other.lo

    def __float__(self):
        return float(self.midpoint()) if self.width != _INF else math.nan


def _coerce_interval(x) -> ValidatedInterval:
    if isinstance(x, ValidatedInterval):
        return x
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return ValidatedInterval(f, f)
    if isinstance(x, QuadraticSurd):
        return to_interval(x, precision_bits())
    raise TypeError(f"cannot coerce {x!r} to an interval")


def to_interval(x, bits: int = None) -> ValidatedInterval:
    """Enclosure of an exact number with width <= 2^-bits."""
    bits = bits or precision_bits()
    if isinstance(x, ValidatedInterval):
        return x
    x = as_exact(x)
    if isinstance(x, Fraction):
        return ValidatedInterval(x, x)
    coeff = Fraction(abs(x.q), x.r)
    guard = bits + max(coeff.numerator.bit_length() - coeff.denominator.bit_length(), 0) + 2
    slo, shi = _sqrt_frac_bounds(Fraction(x.d), guard)
    qr = Fraction(x.q, x.r)
    pr = Fraction(x.p, x.r)
    if x.q >= 0:
        return ValidatedInterval(pr + qr * slo, pr + qr * shi)
    return ValidatedInterval(pr + qr * shi, pr + qr * slo)


def enclosure(x, width: Fraction) -> ValidatedInterval:
    """Enclosure of x no wider than the requested width."""
    bits = 8
    while True:
        iv = to_interval(x, bits)
        if iv.width <= width:
            return iv
        bits *= 2
        if bits > 1 << 16:
            raise PrecisionExhausted("enclosure refinement budget exhausted")


def interval_arith(a: ValidatedInterval, b: ValidatedInterval, op: str) -> ValidatedInterval:
    """Named-op façade over the operator overloads (spec surface)."""
    a, b = _coerce_interval(a), _coerce_interval(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise DomainError(f"unknown interval op {op!r}")


def surd_arith(a, b, op: str):
    """Spec façade: exact result when the field allows, interval fallback
    otherwise; ``cmp`` is always exact."""
    if op == "cmp":
        return exact_cmp(a, b)
    table = {"add": exact_add, "sub": exact_sub, "mul": exact_mul, "div": exact_div}
    if op not in table:
        raise DomainError(f"unknown surd op {op!r}")
    try:
        return table[op](a, b)
    except MixedRadicandError:
        bits = precision_bits()
        ia, ib = to_interval(a, bits), to_interval(b, bits)
        return interval_arith(ia, ib, op)


def float_of(x) -> float:
    """Best-effort float view of any numeric value in this library."""
    if isinstance(x, ValidatedInterval):
        return float(x)
    if isinstance(x, QuadraticSurd):
        return float(x)
    if x == _INF or x == -_INF:
        return float(x)
    return float(Fraction(x))
