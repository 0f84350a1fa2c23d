"""Primorial reduction for sigma*(n) / (n log log n).

For N_k = p_1 ... p_k and N_k <= n < N_{k+1}, sigma*(n)/n <= sigma*(N_k)/N_k,
so it suffices to bound

    sigma*(N_k) / (N_k log log N_k) = prod_{i<=k} (1 + 1/p_i) / log theta(p_k)

for every k. Small k are checked exactly; the range up to k = 10^6 is
streamed in log space with interval sums; k >= 10^6 is covered by the
analytic bound A1/A2 at p_{10^6} = 15,485,863.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import analytic, exact
from . import interval as iv
from .arith import factorize, sigma_star
from .interval import DirectedValue, down, to_fraction, up
from .records import RatioRecord, ScanReport, Verdict, VerificationError
from .sieve import PrimeTable, primes_up_to

EXACT_K_LIMIT = 20
TAIL_K = 1_000_000
TAIL_PRIME = 15_485_863
CHECKPOINT_EVERY = 100_000


class CertificateError(VerificationError):
    """The analytic tail certificate does not hold at the requested threshold."""

    def __init__(self, message: str, certificate: TailCertificate | None = None):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class PrimorialState:
    """Running log-space sums after the first k primes."""

    k: int
    p_k: int
    sum_log1p: DirectedValue  # sum_{i<=k} log(1 + 1/p_i)
    theta: DirectedValue  # sum_{i<=k} log p_i

    @classmethod
    def initial(cls) -> PrimorialState:
        zero = DirectedValue(0.0, 0.0)
        return cls(0, 1, zero, zero)

    def advance(self, p: int) -> PrimorialState:
        s_lo, s_hi, t_lo, t_hi = _step(self.sum_log1p.lo, self.sum_log1p.hi, self.theta.lo, self.theta.hi, p)
        return PrimorialState(self.k + 1, p, DirectedValue(s_lo, s_hi), DirectedValue(t_lo, t_hi))

    def ratio(self) -> DirectedValue:
        return iv.exp(self.sum_log1p) / iv.log(self.theta)

    def to_line(self) -> str:
        return " ".join(
            [str(self.k), str(self.p_k)]
            + [repr(v) for v in (self.sum_log1p.lo, self.sum_log1p.hi, self.theta.lo, self.theta.hi)]
        )

    @classmethod
    def from_line(cls, line: str) -> PrimorialState:
        k, p, s_lo, s_hi, t_lo, t_hi = line.split()
        return cls(
            int(k), int(p),
            DirectedValue(float(s_lo), float(s_hi)),
            DirectedValue(float(t_lo), float(t_hi)),
        )


_nextafter, _log, _log1p, _exp, _INF = math.nextafter, math.log, math.log1p, math.exp, math.inf
_W = iv.LIBM_ULPS


def _step(s_lo, s_hi, t_lo, t_hi, p):
    # one prime's contribution to both running sums, rounded outward
    q = 1.0 / p
    l1 = _log1p(_nextafter(q, -_INF))
    l2 = _log1p(_nextafter(q, _INF))
    lp = _log(p)
    for _ in range(_W):
        l1 = _nextafter(l1, -_INF)
        l2 = _nextafter(l2, _INF)
    lp_lo = lp_hi = lp
    for _ in range(_W):
        lp_lo = _nextafter(lp_lo, -_INF)
        lp_hi = _nextafter(lp_hi, _INF)
    return (
        _nextafter(s_lo + l1, -_INF),
        _nextafter(s_hi + l2, _INF),
        _nextafter(t_lo + lp_lo, -_INF),
        _nextafter(t_hi + lp_hi, _INF),
    )


def _ratio_floats(s_lo, s_hi, t_lo, t_hi):
    num_lo = down(_exp(s_lo), _W)
    num_hi = up(_exp(s_hi), _W)
    den_lo = down(_log(t_lo), _W)
    den_hi = up(_log(t_hi), _W)
    return down(num_lo / den_hi), up(num_hi / den_lo)


def _table_for(k: int, table: PrimeTable | None) -> PrimeTable:
    if table is not None and len(table) >= k:
        return table
    if table is not None:
        raise ValueError(f"prime table up to {table.limit} holds only {len(table)} primes, need p_{k}")
    # p_k < k (log k + log log k) for k >= 6
    bound = 20 if k < 6 else int(k * (math.log(k) + math.log(math.log(k)))) + 1
    return primes_up_to(bound)


def state_at(k: int, table: PrimeTable | None = None) -> PrimorialState:
    """PrimorialState after k primes, summed from scratch."""
    table = _table_for(k, table)
    s_lo = s_hi = t_lo = t_hi = 0.0
    for p in table.primes[:k].tolist():
        s_lo, s_hi, t_lo, t_hi = _step(s_lo, s_hi, t_lo, t_hi, p)
    return PrimorialState(k, table.prime_at(k) if k else 1, DirectedValue(s_lo, s_hi), DirectedValue(t_lo, t_hi))


def exact_primorial_ratio(k: int, table: PrimeTable | None = None, prec: int = 192):
    """mpmath enclosure of sigma*(N_k) / (N_k log log N_k) from big integers."""
    table = _table_for(k, table)
    primes = table.primes[:k].tolist()
    n = math.prod(primes)
    s = math.prod(p + 1 for p in primes)
    return exact.ratio(s, n, n, prec=prec)


def _exact_record(k: int, threshold: Fraction, table: PrimeTable) -> RatioRecord:
    primes = table.primes[:k].tolist()
    n = math.prod(primes)
    s = math.prod(p + 1 for p in primes)
    verdict, enc = exact.compare_ratio(s, n, n, threshold)
    return RatioRecord(k, exact.to_directed(enc), True, verdict, subject_kind="k")


def _log_space_recheck(k: int, threshold: Fraction, table: PrimeTable) -> RatioRecord:
    # escape hatch for straddling double intervals: redo the sums in multiprecision
    for prec in exact.PRECISIONS:
        ctx = exact.context(prec)
        s = ctx.mpf(0)
        t = ctx.mpf(0)
        for p in table.primes[:k].tolist():
            s += ctx.log1p(ctx.mpf(1) / p)
            t += ctx.log(ctx.mpf(p))
        enc = ctx.exp(s) / ctx.log(t)
        lo, hi = exact.endpoints(enc)
        if hi <= threshold or lo > threshold:
            break
    return RatioRecord.build(k, exact.to_directed(enc), threshold, True, subject_kind="k")


def primorial_ratio(k: int, table: PrimeTable | None = None, threshold="1.3007") -> RatioRecord:
    """Ratio sigma*(N_k) / (N_k log log N_k) with its verdict against ``threshold``.

    k <= 20 goes through exact big-integer evaluation; larger k through
    interval sums of log(1 + 1/p) and log p.
    """
    if k < 2:
        raise ValueError("k must be >= 2: log log N_1 = log log 2 is negative")
    c = to_fraction(threshold)
    table = _table_for(k, table)
    if k <= EXACT_K_LIMIT:
        return _exact_record(k, c, table)
    st = state_at(k, table)
    lo, hi = _ratio_floats(st.sum_log1p.lo, st.sum_log1p.hi, st.theta.lo, st.theta.hi)
    rec = RatioRecord.build(k, DirectedValue(lo, hi), c, False, subject_kind="k")
    if rec.verdict is Verdict.INDETERMINATE:
        rec = _log_space_recheck(k, c, table)
    return rec


def verify_primorial_range(
    k_lo: int,
    k_hi: int,
    threshold="1.3007",
    table: PrimeTable | None = None,
    checkpoint_path: str | Path | None = None,
    start: PrimorialState | None = None,
    checkpoint_every: int = CHECKPOINT_EVERY,
) -> ScanReport:
    """Check sigma*(N_k)/(N_k log log N_k) <= threshold for every k in [k_lo, k_hi].

    ABOVE verdicts become exceptions. INDETERMINATE verdicts are re-run in
    multiprecision and, if they still straddle, land in ``unresolved``.
    ``start`` resumes from a checkpointed state with start.k < k_lo.
    """
    if not 2 <= k_lo <= k_hi:
        raise ValueError(f"need 2 <= k_lo <= k_hi, got {k_lo}, {k_hi}")
    c = to_fraction(threshold)
    table = _table_for(k_hi, table)
    t0 = time.perf_counter()
    report = ScanReport("primorial", k_lo, k_hi + 1, c)

    state = start or PrimorialState.initial()
    if state.k >= k_lo:
        raise ValueError(f"start state k = {state.k} is not before k_lo = {k_lo}")
    s_lo, s_hi = state.sum_log1p.lo, state.sum_log1p.hi
    t_lo, t_hi = state.theta.lo, state.theta.hi
    c_float_lo, c_float_hi = iv.enclose_rational(c)
    ckpt = open(checkpoint_path, "w") if checkpoint_path else None

    best = None  # (hi, k, lo)
    primes = table.primes[state.k : k_hi].tolist()
    try:
        for k, p in enumerate(primes, start=state.k + 1):
            s_lo, s_hi, t_lo, t_hi = _step(s_lo, s_hi, t_lo, t_hi, p)
            if ckpt is not None and k % checkpoint_every == 0:
                ckpt.write(PrimorialState(k, p, DirectedValue(s_lo, s_hi), DirectedValue(t_lo, t_hi)).to_line() + "\n")
            if k < k_lo:
                continue
            if k <= EXACT_K_LIMIT:
                rec = _exact_record(k, c, table)
                r_lo, r_hi = rec.ratio.lo, rec.ratio.hi
            else:
                r_lo, r_hi = _ratio_floats(s_lo, s_hi, t_lo, t_hi)
                if r_hi <= c_float_lo:
                    rec = None  # certainly BELOW
                elif r_lo > c_float_hi:
                    rec = RatioRecord(k, DirectedValue(r_lo, r_hi), False, Verdict.ABOVE, subject_kind="k")
                else:
                    rec = RatioRecord.build(k, DirectedValue(r_lo, r_hi), c, False, subject_kind="k")
                    if rec.verdict is Verdict.INDETERMINATE:
                        rec = _log_space_recheck(k, c, table)
                        r_lo, r_hi = rec.ratio.lo, rec.ratio.hi
            if best is None or r_hi > best[0]:
                best = (r_hi, k, r_lo)
            report.total += 1
            if rec is None or rec.verdict is Verdict.BELOW:
                report.satisfying += 1
            elif rec.verdict is Verdict.ABOVE:
                report.exceptions.append(rec)
            else:
                report.unresolved.append(rec)
    finally:
        if ckpt is not None:
            ckpt.close()

    hi_val, k_best, lo_val = best
    report.max_ratio = RatioRecord.build(k_best, DirectedValue(lo_val, hi_val), c, k_best <= EXACT_K_LIMIT, subject_kind="k")
    report.extra["final_state"] = PrimorialState(
        k_hi, table.prime_at(k_hi), DirectedValue(s_lo, s_hi), DirectedValue(t_lo, t_hi)
    ).to_line()
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return report


def load_checkpoints(path: str | Path) -> list[PrimorialState]:
    with open(path) as fh:
        return [PrimorialState.from_line(line) for line in fh if line.strip()]


# -- analytic tail --------------------------------------------------------------


@dataclass
class TailCertificate:
    threshold: Fraction
    k0: int
    p_k0: int
    variant: str
    mertens_cutoff_ok: bool
    theta_cutoff_ok: bool
    ratio_at_p_k0: DirectedValue
    ratio_ok: bool
    grid: list[tuple[float, DirectedValue]] = field(default_factory=list)
    grid_monotone: bool = False
    monotonicity_argument: str = (
        "A1 decreases in x (its exponent is a positive multiple of 1/log^2 x); "
        "A2 increases in x (-log(1 - c/L)/L is a product of two positive decreasing "
        "factors); both are positive, so A1/A2 is non-increasing on x >= 10,544,111."
    )

    @property
    def ok(self) -> bool:
        return self.mertens_cutoff_ok and self.theta_cutoff_ok and self.ratio_ok and self.grid_monotone

    def summary(self) -> str:
        return (
            f"k >= {self.k0} (p_k >= {self.p_k0}): A1/A2 in [{self.ratio_at_p_k0.lo!r}, "
            f"{self.ratio_at_p_k0.hi!r}] vs threshold {float(self.threshold)} -> "
            f"{'certified' if self.ok else 'NOT certified'}"
        )


def asymptotic_tail_certificate(
    threshold="1.3007",
    table: PrimeTable | None = None,
    variant: str = "printed",
    grid_points: int = 32,
    grid_top: float = 1e12,
) -> TailCertificate:
    """Certify sigma*(N_k)/(N_k log log N_k) <= threshold for all k >= 10^6.

    Raises CertificateError when any ingredient fails; the partially filled
    certificate is attached to the exception.
    """
    c = to_fraction(threshold)
    if table is not None and len(table) >= TAIL_K:
        p_k0 = table.prime_at(TAIL_K)
    else:
        p_k0 = TAIL_PRIME
    bounds = analytic.BOUNDS
    r0 = analytic.ratio_bound(p_k0, variant)
    cert = TailCertificate(
        threshold=c,
        k0=TAIL_K,
        p_k0=p_k0,
        variant=variant,
        mertens_cutoff_ok=bounds.mertens_cutoff <= p_k0,
        theta_cutoff_ok=bounds.theta_cutoff <= p_k0,
        ratio_at_p_k0=r0,
        ratio_ok=r0.certainly_le(c),
    )
    if not (cert.mertens_cutoff_ok and cert.theta_cutoff_ok):
        raise CertificateError("p_{10^6} is below a validity cutoff", cert)
    if not cert.ratio_ok:
        raise CertificateError(
            f"A1/A2 at p_k = {p_k0} is {r0}, which does not lie below {float(c)}", cert
        )
    xs = [p_k0 * (grid_top / p_k0) ** (i / (grid_points - 1)) for i in range(grid_points)]
    cert.grid = [(x, analytic.ratio_bound(x, variant)) for x in xs]
    cert.grid_monotone = all(b.hi <= a.lo for (_, a), (_, b) in zip(cert.grid, cert.grid[1:]))
    if not cert.grid_monotone:
        raise CertificateError("A1/A2 grid is not monotone non-increasing", cert)
    return cert


# -- reduction step --------------------------------------------------------------

# N_1 .. N_9
PRIMORIALS = [2, 6, 30, 210, 2310, 30030, 510510, 9699690, 223092870]


def reduction_step_check(n: int, table: PrimeTable | None = None) -> bool:
    """Exact check of sigma*(n)/n <= sigma*(N_k)/N_k for N_k <= n < N_{k+1}."""
    if not 6 <= n < PRIMORIALS[-1]:
        raise ValueError(f"reduction check covers 6 <= n < {PRIMORIALS[-1]}, got {n}")
    k = max(i for i, N in enumerate(PRIMORIALS, start=1) if N <= n)
    N = PRIMORIALS[k - 1]
    return sigma_star(factorize(n)) * N <= sigma_star(factorize(N)) * n
