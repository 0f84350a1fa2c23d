"""Multiprecision interval enclosures for the exact re-check phase.

Every function here works in a private mpmath interval context per thread,
so the global mpmath precision is never touched and scans can call in from
worker threads.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from .interval import DirectedValue
from .records import Verdict

PRECISIONS = (96, 192, 384, 768, 1536)

_local = threading.local()


def context(prec: int) -> MPIntervalContext:
    cache = getattr(_local, "contexts", None)
    if cache is None:
        cache = _local.contexts = {}
    ctx = cache.get(prec)
    if ctx is None:
        ctx = cache[prec] = MPIntervalContext()
        ctx.prec = prec
    return ctx


def endpoints(x) -> tuple[Fraction, Fraction]:
    a, b = x._mpi_
    return Fraction(*libmp.to_rational(a)), Fraction(*libmp.to_rational(b))


def to_directed(x) -> DirectedValue:
    """Round an mpmath interval outward to doubles."""
    a, b = x._mpi_
    return DirectedValue(libmp.to_float(a, rnd="d"), libmp.to_float(b, rnd="u"))


def loglog(n: int, prec: int = PRECISIONS[0]):
    ctx = context(prec)
    return ctx.log(ctx.log(ctx.mpf(n)))


def ratio(numer: int, denom: int, n: int, egamma: bool = False, prec: int = PRECISIONS[0]):
    """Enclosure of numer / (denom * log log n [* e^gamma])."""
    ctx = context(prec)
    den = ctx.mpf(denom) * ctx.log(ctx.log(ctx.mpf(n)))
    if egamma:
        den = den * ctx.exp(ctx.euler)
    return ctx.mpf(numer) / den


def compare_ratio(numer: int, denom: int, n: int, threshold: Fraction, egamma: bool = False):
    """Decide numer / (denom * log log n [* e^gamma]) against ``threshold``.

    Returns (verdict, enclosure) with precision raised until the enclosure
    clears the threshold. ABOVE means strictly greater. The ratio is
    transcendental for n >= 3, so a tie cannot occur; if the enclosure
    still straddles at the top precision the verdict is INDETERMINATE.
    """
    enc = None
    for prec in PRECISIONS:
        enc = ratio(numer, denom, n, egamma, prec)
        lo, hi = endpoints(enc)
        if hi <= threshold:
            return Verdict.BELOW, enc
        if lo > threshold:
            return Verdict.ABOVE, enc
    return Verdict.INDETERMINATE, enc
