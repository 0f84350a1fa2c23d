"""Exhaustive range scans over sieved divisor-function values.

Threshold scans use a two-phase compare. Phase one evaluates the ratio in
double precision for the whole segment and flags anything within a relative
1e-9 of the threshold or above it. Phase two re-decides each flagged n with
multiprecision interval enclosures of log log n against the exact rational
threshold. A seeded random audit then re-checks unflagged n from scratch.
"""

from __future__ import annotations

import json
import math
import time
import zlib
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, NamedTuple

import numpy as np
from numba import njit

from . import arith, exact
from .arith import Factorization
from .interval import DirectedValue, to_fraction
from .records import RatioRecord, ScanReport, Verdict, VerificationError, merge_reports
from .sieve import DEFAULT_SEGMENT_SIZE, RANGE_CEILING, map_segments, segment_functions

DESK_CEILING = 10**7 + 1
LONG_RUN_CEILING = RANGE_CEILING + 1
FILTER_MARGIN = 1e-9
DEFAULT_AUDIT = 10_000
EGAMMA_FLOAT = math.exp(0.5772156649015329)

EXCLUSION_REASONS = {
    1: "log log 1 is undefined",
    2: "log log 2 < 0, ratio has the wrong sign",
}


class ScanLimitError(ValueError):
    """Range beyond the desk-scale ceiling without the long-run flag."""


def as_threshold(x) -> Fraction:
    """Exact decimal threshold; floats are read through their shortest repr."""
    if isinstance(x, float):
        return Fraction(repr(x))
    q = to_fraction(x)
    if q <= 0:
        raise ValueError("threshold must be positive")
    return q


def _check_limits(lo: int, hi: int, long_run: bool):
    if not 1 <= lo < hi:
        raise ValueError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    ceiling = LONG_RUN_CEILING if long_run else DESK_CEILING
    if hi > ceiling:
        hint = "" if long_run else " (pass long_run=True for larger scans)"
        raise ScanLimitError(f"hi = {hi} exceeds the scan ceiling {ceiling}{hint}")


@njit(nogil=True, cache=True)
def _float_ratios(num, den, lo, use_n, scale):
    # num / (den * log log n * scale); den is n itself when use_n
    out = np.empty(num.shape[0], dtype=np.float64)
    for i in range(num.shape[0]):
        n = lo + i
        if n < 3:
            out[i] = -np.inf
            continue
        dv = float(n) if use_n else float(den[i])
        out[i] = float(num[i]) / (dv * math.log(math.log(float(n))) * scale)
    return out


@dataclass(frozen=True)
class ScanKind:
    name: str
    kinds: frozenset
    numer: Callable[[dict], np.ndarray]
    denom: Callable[[dict], np.ndarray] | None  # None means n
    egamma: bool = False
    description: str = ""


SCAN_KINDS = {
    "sigma-star": ScanKind(
        "sigma-star", frozenset({"sigma_star"}),
        lambda v: v["sigma_star"], None,
        description="sigma*(n) / (n log log n)",
    ),
    "sigma-exp": ScanKind(
        "sigma-exp", frozenset({"sigma_exp"}),
        lambda v: v["sigma_exp"], None,
        description="sigma_e(n) / (n log log n)",
    ),
    "d-dexp": ScanKind(
        "d-dexp", frozenset({"d", "d_exp", "sigma_exp"}),
        lambda v: v["d"] * v["d_exp"], None,
        description="d(n) d_e(n) / (n log log n)",
    ),
    "derbal": ScanKind(
        "derbal", frozenset({"sigma", "sigma_star"}),
        lambda v: v["sigma"], lambda v: v["sigma_star"], egamma=True,
        description="sigma(n) / (e^gamma sigma*(n) log log n), threshold 1",
    ),
}


def _exact_inputs(kind: ScanKind, n: int) -> tuple[int, int]:
    """(numerator, denominator) of the ratio at n from closed forms on factorize(n)."""
    f = arith.factorize(n)
    if kind.name == "sigma-star":
        return arith.sigma_star(f), n
    if kind.name == "sigma-exp":
        return arith.sigma_exp(f), n
    if kind.name == "d-dexp":
        return arith.d(f) * arith.d_exp(f), n
    if kind.name == "derbal":
        return arith.sigma(f), arith.sigma_star(f)
    raise ValueError(kind.name)


def _excluded(a: int, b: int) -> list[tuple[int, str]]:
    return [(n, why) for n, why in EXCLUSION_REASONS.items() if a <= n < b]


def _threshold_segment(kind: ScanKind, c: Fraction, a: int, b: int, primes) -> ScanReport:
    vals = segment_functions(a, b, set(kind.kinds), primes)
    num = kind.numer(vals)
    den = kind.denom(vals) if kind.denom is not None else num  # placeholder when use_n
    r = _float_ratios(num, den, a, kind.denom is None, EGAMMA_FLOAT if kind.egamma else 1.0)

    rep = ScanReport(kind.name, a, b, c)
    rep.excluded = _excluded(a, b)
    off = max(a, 3) - a
    if off >= b - a:
        return rep
    rep.total = b - a - off

    def record(i: int) -> RatioRecord:
        n = a + i
        d_ = n if kind.denom is None else int(den[i])
        verdict, enc = exact.compare_ratio(int(num[i]), d_, n, c, kind.egamma)
        return RatioRecord(n, exact.to_directed(enc), True, verdict, approx=float(r[i]))

    cutoff = float(c) * (1.0 - FILTER_MARGIN)
    for i in (np.flatnonzero(r[off:] >= cutoff) + off).tolist():
        rec = record(i)
        if rec.verdict is Verdict.ABOVE:
            rep.exceptions.append(rec)
        elif rec.verdict is Verdict.INDETERMINATE:
            rep.unresolved.append(rec)
    rep.satisfying = rep.total - len(rep.exceptions) - len(rep.unresolved)
    rep.max_ratio = record(int(np.argmax(r[off:])) + off)

    if kind.name == "d-dexp":
        bad = np.flatnonzero(num > vals["sigma_exp"]) + a
        rep.extra["minculete_violations"] = bad.tolist()
    return rep


def _audit(kind: ScanKind, report: ScanReport, samples: int) -> int:
    lo = max(report.lo, 3)
    if samples <= 0 or lo >= report.hi:
        return 0
    seed = zlib.crc32(f"{kind.name}:{report.lo}:{report.hi}".encode())
    rng = np.random.default_rng(seed)
    ns = rng.integers(lo, report.hi, size=min(samples, report.hi - lo)).tolist()
    above = set(report.exception_subjects)
    for n in ns:
        numer, denom = _exact_inputs(kind, n)
        verdict, _ = exact.compare_ratio(numer, denom, n, report.threshold, kind.egamma)
        if verdict is not Verdict.INDETERMINATE and (verdict is Verdict.ABOVE) != (n in above):
            raise VerificationError(f"audit mismatch at n = {n}: exact verdict {verdict.value}")
    return len(ns)


def threshold_scan(
    kind: str,
    lo: int,
    hi: int,
    threshold,
    *,
    threads: int | None = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    audit: int = DEFAULT_AUDIT,
    long_run: bool = False,
) -> ScanReport:
    """Every n in [lo, hi) whose ratio of type ``kind`` exceeds ``threshold``."""
    spec = SCAN_KINDS[kind]
    _check_limits(lo, hi, long_run)
    c = as_threshold(threshold)
    t0 = time.perf_counter()
    parts = map_segments(lo, hi, lambda a, b, p: _threshold_segment(spec, c, a, b, p), segment_size, threads)
    report = merge_reports(parts)
    report.audited = _audit(spec, report, audit)
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return report


def scan_sigma_star_exceptions(lo: int, hi: int, threshold="1.3007", **kw) -> ScanReport:
    return threshold_scan("sigma-star", lo, hi, threshold, **kw)


def scan_sigma_exp_exceptions(lo: int, hi: int, threshold="1.3007", **kw) -> ScanReport:
    return threshold_scan("sigma-exp", lo, hi, threshold, **kw)


def scan_d_dexp_exceptions(lo: int, hi: int, threshold="1.3007", **kw) -> ScanReport:
    """d(n) d_e(n) against threshold * n log log n.

    Also checks d(n) d_e(n) <= sigma_e(n) at every visited n; offenders are
    listed under ``extra["minculete_violations"]``.
    """
    return threshold_scan("d-dexp", lo, hi, threshold, **kw)


def scan_derbal(lo: int, hi: int, **kw) -> ScanReport:
    """n with sigma(n) >= e^gamma sigma*(n) log log n.

    The reported ratio is sigma(n) / (e^gamma sigma*(n) log log n) against 1.
    """
    return threshold_scan("derbal", lo, hi, 1, **kw)


# -- pointwise d * d_e <= sigma_e -----------------------------------------------


def _minculete_segment(a: int, b: int, primes) -> ScanReport:
    vals = segment_functions(a, b, {"d", "d_exp", "sigma_exp"}, primes)
    lhs = vals["d"] * vals["d_exp"]
    rhs = vals["sigma_exp"]
    rep = ScanReport("minculete", a, b, Fraction(1))
    rep.total = b - a
    for i in np.flatnonzero(lhs > rhs).tolist():
        q = Fraction(int(lhs[i]), int(rhs[i]))
        rep.exceptions.append(RatioRecord(a + i, DirectedValue.exact(q), True, Verdict.ABOVE))
    rep.satisfying = rep.total - len(rep.exceptions)
    q = lhs / rhs
    i = int(np.argmax(q))
    rep.max_ratio = RatioRecord.build(
        a + i, DirectedValue.exact(Fraction(int(lhs[i]), int(rhs[i]))), 1, True, approx=float(q[i])
    )
    return rep


def scan_minculete(lo: int, hi: int, *, threads=None, segment_size=DEFAULT_SEGMENT_SIZE, long_run=False) -> ScanReport:
    """Check d(n) d_e(n) <= sigma_e(n) exactly for every n in [lo, hi)."""
    _check_limits(lo, hi, long_run)
    t0 = time.perf_counter()
    report = merge_reports(map_segments(lo, hi, _minculete_segment, segment_size, threads))
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return report


# -- sigma* versus sigma_e ----------------------------------------------------


class WitnessError(VerificationError):
    def __init__(self, f: Factorization, star: int, sexp: int):
        super().__init__(
            f"sigma*({f}) = {star} but sigma_e = {sexp} (difference {star - sexp})"
        )
        self.factorization = f
        self.sigma_star = star
        self.sigma_exp = sexp


@dataclass(frozen=True)
class EqualityWitness:
    """An n with sigma*(n) = sigma_e(n), re-verified on construction."""

    n: int
    factorization: Factorization
    common_value: int

    def __post_init__(self):
        f = self.factorization
        star, sexp = arith.sigma_star(f), arith.sigma_exp(f)
        if not (star == sexp == self.common_value and f.value == self.n):
            raise WitnessError(f, star, sexp)


def verify_witness(f: Factorization | str | int) -> EqualityWitness:
    if isinstance(f, str):
        f = arith.parse_factorization(f)
    elif not isinstance(f, Factorization):
        f = arith.factorize(f)
    star, sexp = arith.sigma_star(f), arith.sigma_exp(f)
    if star != sexp:
        raise WitnessError(f, star, sexp)
    return EqualityWitness(f.value, f, star)


class ComparisonCounts(NamedTuple):
    greater: int
    equal: int
    less: int
    equal_at: list


def _compare_segment(a: int, b: int, primes) -> ComparisonCounts:
    vals = segment_functions(a, b, {"sigma_star", "sigma_exp"}, primes)
    st, se = vals["sigma_star"], vals["sigma_exp"]
    gt = int(np.count_nonzero(st > se))
    eq_idx = np.flatnonzero(st == se)
    return ComparisonCounts(gt, len(eq_idx), (b - a) - gt - len(eq_idx), (eq_idx + a).tolist())


def compare_sigma_star_exp(lo: int, hi: int, *, threads=None, segment_size=DEFAULT_SEGMENT_SIZE, long_run=False) -> ComparisonCounts:
    """Counts of n in [lo, hi) with sigma* >, =, < sigma_e, plus the equal n."""
    _check_limits(lo, hi, long_run)
    parts = map_segments(lo, hi, _compare_segment, segment_size, threads)
    return ComparisonCounts(
        sum(p.greater for p in parts),
        sum(p.equal for p in parts),
        sum(p.less for p in parts),
        [n for p in parts for n in p.equal_at],
    )


def equality_search(lo: int, hi: int, include_one: bool = False, **kw) -> list[EqualityWitness]:
    """Every n in [lo, hi) with sigma*(n) = sigma_e(n).

    n = 1 (both sides equal 1) is left out unless ``include_one``.
    """
    counts = compare_sigma_star_exp(lo, hi, **kw)
    return [verify_witness(n) for n in counts.equal_at if include_one or n != 1]


class DensityResult(NamedTuple):
    count: int
    proportion: float
    hi: int

    @property
    def exact_proportion(self) -> Fraction:
        return Fraction(self.count, self.hi)


def density_sigma_star_gt(hi: int, **kw) -> DensityResult:
    """Number and proportion of 1 <= n <= hi with sigma*(n) > sigma_e(n)."""
    if hi < 1000:
        raise ValueError("hi must be >= 1000")
    counts = compare_sigma_star_exp(1, hi + 1, **kw)
    return DensityResult(counts.greater, counts.greater / hi, hi)


def load_fixture(name: str) -> dict:
    return json.loads(resources.files("ubv").joinpath("fixtures").joinpath(name).read_text())
