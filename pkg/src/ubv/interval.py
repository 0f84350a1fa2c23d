"""Outward-rounded interval arithmetic over IEEE doubles.

Every operation returns an interval that provably contains the exact real
result of the same operation applied to any points of the operand intervals.
Arithmetic (+, -, *, /) is correctly rounded in IEEE 754, so one ulp of
outward widening is enough. ``exp``, ``log`` and ``log1p`` come from the
platform libm, which is faithful but not correctly rounded, so those get
``LIBM_ULPS`` ulps of widening instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Rational

LIBM_ULPS = 2

_INF = math.inf


def down(x: float, ulps: int = 1) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, -_INF)
    return x


def up(x: float, ulps: int = 1) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, _INF)
    return x


def to_fraction(x) -> Fraction:
    """Exact rational value of a float, int, Decimal, Fraction or decimal string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(Decimal(x.strip()))
    if isinstance(x, (int, Rational, Decimal)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def enclose_rational(q) -> tuple[float, float]:
    """Tightest double pair [lo, hi] with lo <= q <= hi."""
    q = to_fraction(q)
    f = float(q)
    ff = Fraction(f)
    if ff == q:
        return f, f
    if ff < q:
        return f, up(f)
    return down(f), f


@dataclass(frozen=True, slots=True)
class DirectedValue:
    """Closed interval [lo, hi] known to contain some real quantity."""

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("NaN endpoint")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo!r}, {self.hi!r}]")

    # construction -------------------------------------------------------

    @classmethod
    def exact(cls, x) -> DirectedValue:
        """Enclosure of an exact number (int, float, Fraction, Decimal or decimal string)."""
        if isinstance(x, float):
            return cls(x, x)
        return cls(*enclose_rational(x))

    @classmethod
    def from_decimal(cls, text: str, radius: str = "0") -> DirectedValue:
        """Enclosure of ``text ± radius`` with both given as decimal strings."""
        c = to_fraction(text)
        r = to_fraction(radius)
        lo, _ = enclose_rational(c - r)
        _, hi = enclose_rational(c + r)
        return cls(lo, hi)

    @classmethod
    def hull(cls, *values: DirectedValue) -> DirectedValue:
        return cls(min(v.lo for v in values), max(v.hi for v in values))

    # queries ------------------------------------------------------------

    @property
    def width(self) -> float:
        return up(self.hi - self.lo)

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x) -> bool:
        q = to_fraction(x)
        return Fraction(self.lo) <= q <= Fraction(self.hi)

    def subset_of(self, other: DirectedValue) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def truncates_to(self, digits: str) -> bool:
        """True when every point of the interval starts with the decimal ``digits``.

        ``DirectedValue(0.2614972, 0.2614973).truncates_to("0.26149")`` is True:
        the whole interval sits inside [0.26149, 0.26150).
        """
        d = Decimal(digits)
        step = Decimal(1).scaleb(d.as_tuple().exponent)
        lo_bound = Fraction(d)
        hi_bound = Fraction(d + step)
        return lo_bound <= Fraction(self.lo) and Fraction(self.hi) < hi_bound

    def certainly_le(self, c) -> bool:
        return Fraction(self.hi) <= to_fraction(c)

    def certainly_lt(self, c) -> bool:
        return Fraction(self.hi) < to_fraction(c)

    def certainly_gt(self, c) -> bool:
        return Fraction(self.lo) > to_fraction(c)

    # arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> DirectedValue:
        if isinstance(other, DirectedValue):
            return other
        return DirectedValue.exact(other)

    def __neg__(self) -> DirectedValue:
        return DirectedValue(-self.hi, -self.lo)

    def __add__(self, other) -> DirectedValue:
        o = self._coerce(other)
        return DirectedValue(down(self.lo + o.lo), up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> DirectedValue:
        o = self._coerce(other)
        return DirectedValue(down(self.lo - o.hi), up(self.hi - o.lo))

    def __rsub__(self, other) -> DirectedValue:
        return self._coerce(other) - self

    def __mul__(self, other) -> DirectedValue:
        o = self._coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return DirectedValue(down(min(products)), up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> DirectedValue:
        o = self._coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return DirectedValue(down(min(quotients)), up(max(quotients)))

    def __rtruediv__(self, other) -> DirectedValue:
        return self._coerce(other) / self

    def __repr__(self) -> str:
        return f"DirectedValue({self.lo!r}, {self.hi!r})"


def exp(x: DirectedValue) -> DirectedValue:
    lo = down(math.exp(x.lo), LIBM_ULPS)
    return DirectedValue(max(lo, 0.0), up(math.exp(x.hi), LIBM_ULPS))


def log(x: DirectedValue) -> DirectedValue:
    if x.lo <= 0.0:
        raise ValueError("log of an interval reaching zero or below")
    return DirectedValue(down(math.log(x.lo), LIBM_ULPS), up(math.log(x.hi), LIBM_ULPS))


def log1p(x: DirectedValue) -> DirectedValue:
    if x.lo <= -1.0:
        raise ValueError("log1p of an interval reaching -1 or below")
    return DirectedValue(down(math.log1p(x.lo), LIBM_ULPS), up(math.log1p(x.hi), LIBM_ULPS))


def sqr(x: DirectedValue) -> DirectedValue:
    if x.lo >= 0.0:
        return DirectedValue(down(x.lo * x.lo), up(x.hi * x.hi))
    if x.hi <= 0.0:
        return DirectedValue(down(x.hi * x.hi), up(x.lo * x.lo))
    return DirectedValue(0.0, up(max(x.lo * x.lo, x.hi * x.hi)))


def log_int(n: int) -> DirectedValue:
    """Enclosure of log(n) for a positive integer of any size."""
    if n <= 0:
        raise ValueError("log of non-positive integer")
    if n < 2**53:
        return log(DirectedValue(float(n), float(n)))
    shift = n.bit_length() - 53
    head = n >> shift
    # n / 2**shift lies in [head, head + 1]
    mant = log(DirectedValue(float(head), float(head + 1)))
    return mant + DirectedValue.exact(shift) * LN2


# log(2) = 0.693147180559945309417232121458176568...
LN2 = DirectedValue.from_decimal("0.693147180559945309417232121458176568", "1e-36")
# pi = 3.14159265358979323846264338327950288...
PI = DirectedValue.from_decimal("3.14159265358979323846264338327950288", "1e-35")
