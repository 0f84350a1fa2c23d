"""Explicit prime-sum and Chebyshev-theta bounds, evaluated as interval enclosures.

Two explicit estimates are taken as given, each with its validity cutoff:

    sum_{p <= x} 1/p <= log log x + B + 1/(10 log^2 x) + 4/(15 log^3 x)    (x >= 10372)
    theta(x) >= x (1 - 0.006788 / log x)                                  (x >= 10544111)

From them, with L = log x,

    A1(x) = exp(B + 1/(10 L^2) + 4/(15 L^2))       bounds prod_{p<=x}(1 + 1/p) / L
    A2(x) = 1 + log(1 - 0.006788 / L) / L           bounds log theta(x) / L from below

and A1/A2 bounds the primorial ratio prod (1 + 1/p_i) / log theta(p_k).

A1 is evaluated with both correction terms over L^2 by default ("printed").
The prime-sum estimate itself has the second term over L^3; that sharper
variant is available as ``variant="dusart"``. Since L^2 < L^3, the default
is the larger, and therefore still valid, bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import interval as iv
from .interval import DirectedValue, down, up

MERTENS_CUTOFF = 10_372
THETA_CUTOFF = 10_544_111
THETA_DEFICIT = Fraction(6788, 1_000_000)

# Euler's constant and the Meissel-Mertens constant to 40 digits
_GAMMA_DIGITS = "0.5772156649015328606065120900824024310422"
_B_DIGITS = "0.2614972128476427837554268386086958590516"

VARIANTS = ("printed", "dusart")


class DomainError(ValueError):
    """Argument below the validity cutoff of an explicit bound."""


@dataclass(frozen=True)
class BoundTable:
    B: DirectedValue
    gamma: DirectedValue
    theta_deficit: Fraction = THETA_DEFICIT
    mertens_cutoff: int = MERTENS_CUTOFF
    theta_cutoff: int = THETA_CUTOFF
    e_gamma: DirectedValue = field(init=False)
    e_B: DirectedValue = field(init=False)
    six_egamma_over_pi2: DirectedValue = field(init=False)
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        e_gamma = iv.exp(self.gamma)
        object.__setattr__(self, "e_gamma", e_gamma)
        object.__setattr__(self, "e_B", iv.exp(self.B))
        object.__setattr__(self, "six_egamma_over_pi2", 6 * e_gamma / iv.sqr(iv.PI))

    @classmethod
    def default(cls) -> BoundTable:
        return cls(
            B=DirectedValue.from_decimal(_B_DIGITS, "1e-40"),
            gamma=DirectedValue.from_decimal(_GAMMA_DIGITS, "1e-40"),
            provenance={
                "B": "Meissel-Mertens constant, 40 digits; cross-checked by compute_mertens_B",
                "gamma": "Euler-Mascheroni constant, 40 digits",
                "theta_deficit": "theta(x) >= x(1 - 0.006788/log x) for x >= 10544111",
                "mertens_cutoff": "prime reciprocal sum bound valid for x >= 10372",
            },
        )


BOUNDS = BoundTable.default()


def _real(x) -> DirectedValue:
    return x if isinstance(x, DirectedValue) else DirectedValue.exact(x)


def _require(x: DirectedValue, cutoff: int, what: str):
    if not x.lo >= cutoff:
        raise DomainError(f"{what} is only valid for x >= {cutoff}, got x = {x.lo!r}")


def mertens_upper(x, table: BoundTable = BOUNDS) -> DirectedValue:
    """Upper bound for sum_{p<=x} 1/p; the ``hi`` endpoint is the usable bound."""
    x = _real(x)
    _require(x, table.mertens_cutoff, "mertens_upper")
    L = iv.log(x)
    L2 = iv.sqr(L)
    return iv.log(L) + table.B + 1 / (10 * L2) + 4 / (15 * L2 * L)


def theta_lower(x, table: BoundTable = BOUNDS) -> DirectedValue:
    """Lower bound for theta(x); the ``lo`` endpoint is the usable bound."""
    x = _real(x)
    _require(x, table.theta_cutoff, "theta_lower")
    L = iv.log(x)
    return x * (1 - DirectedValue.exact(table.theta_deficit) / L)


def A1(x, variant: str = "printed", table: BoundTable = BOUNDS) -> DirectedValue:
    x = _real(x)
    _require(x, table.mertens_cutoff, "A1")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    L = iv.log(x)
    L2 = iv.sqr(L)
    third = L2 if variant == "printed" else L2 * L
    return iv.exp(table.B + 1 / (10 * L2) + 4 / (15 * third))


def A2(x, table: BoundTable = BOUNDS) -> DirectedValue:
    x = _real(x)
    _require(x, table.theta_cutoff, "A2")
    L = iv.log(x)
    # log1p keeps the tiny argument accurate
    return 1 + iv.log1p(-(DirectedValue.exact(table.theta_deficit) / L)) / L


def ratio_bound(x, variant: str = "printed", table: BoundTable = BOUNDS) -> DirectedValue:
    """Enclosure of A1(x)/A2(x), the bound on the primorial ratio at p_k = x."""
    x = _real(x)
    _require(x, table.theta_cutoff, "ratio_bound")
    return A1(x, variant, table) / A2(x, table)


def compute_mertens_B(cutoff: int, gamma: DirectedValue = BOUNDS.gamma) -> DirectedValue:
    """Enclose B = gamma + sum_p (log(1 - 1/p) + 1/p) from primes up to ``cutoff``.

    Each summand is negative with magnitude at most 1/(2p(p-1)), so the tail
    over p > cutoff lies in [-1/(2 cutoff), 0].
    """
    from .sieve import primes_up_to

    cutoff = int(cutoff)
    if cutoff < 10**5:
        raise ValueError("cutoff must be >= 10^5 to certify five decimals of B")
    nextafter, log1p, inf = math.nextafter, math.log1p, math.inf
    s_lo = s_hi = 0.0
    for p in primes_up_to(cutoff).primes.tolist():
        t = 1.0 / p
        t_lo, t_hi = nextafter(t, -inf), nextafter(t, inf)
        l_lo = down(log1p(-t_hi), iv.LIBM_ULPS)
        l_hi = up(log1p(-t_lo), iv.LIBM_ULPS)
        s_lo = nextafter(s_lo + nextafter(l_lo + t_lo, -inf), -inf)
        s_hi = nextafter(s_hi + nextafter(l_hi + t_hi, inf), inf)
    tail = DirectedValue(-up(1.0 / (2 * cutoff)), 0.0)
    out = gamma + DirectedValue(s_lo, s_hi) + tail
    if not out.truncates_to("0.26149"):
        raise ArithmeticError(f"enclosure {out} does not certify B = 0.26149...")
    return out
