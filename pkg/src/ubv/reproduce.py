"""One-shot reproduction of every desk-checkable claim.

Each claim is a function returning ``(passed, detail)``. ``run_claims``
times them and turns exceptions into failures, so one broken claim never
hides the rest.
"""

from __future__ import annotations

import random
import time
import traceback
from dataclasses import dataclass
from typing import Callable

from . import analytic, arith, scanner, verifier
from .arith import DivisorFunctionKind
from .sieve import primes_up_to

THRESHOLD = "1.3007"
PAPER_WITNESSES = [20, 45, 320, 6615, 382200]
LARGE_WITNESSES = ["680890228200", "2^49 * 4363953127297"]
PAPER_DENSITY = 0.778307


@dataclass
class ClaimResult:
    name: str
    status: str  # PASS, FAIL or SKIPPED
    detail: str
    seconds: float

    @property
    def failed(self) -> bool:
        return self.status == "FAIL"


@dataclass(frozen=True)
class Claim:
    name: str
    title: str
    check: Callable[..., tuple[bool, str]]
    budget_s: float
    long_run: bool = False


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def claim_theorem_desk(threads=None) -> tuple[bool, str]:
    rep = scanner.scan_sigma_star_exceptions(3, 9_699_691, THRESHOLD, threads=threads)
    last = rep.exceptions[-1]
    ok = last.subject == 570_570 and 1.3125 <= last.ratio.lo and last.ratio.hi < 1.3126 and not rep.unresolved
    return ok, f"{len(rep.exceptions)} exceptions, largest n = {last.subject}, ratio {last.ratio.lo:.6f}"


def claim_exception_tail(threads=None) -> tuple[bool, str]:
    rep = scanner.scan_sigma_star_exceptions(53_132, 9_699_691, THRESHOLD, threads=threads)
    got = {r.subject: r.ratio for r in rep.exceptions}
    ok = (
        set(got) == {510_510, 570_570}
        and got[510_510].truncates_to("1.3245")
        and got[570_570].truncates_to("1.3125")
        and not rep.unresolved
    )
    ratios = ", ".join(f"{n}: {r.lo:.6f}" for n, r in got.items())
    return ok, f"exceptions {{{ratios}}}"


def claim_primorials(threads=None) -> tuple[bool, str]:
    table = primes_up_to(verifier.TAIL_PRIME)
    rep = verifier.verify_primorial_range(8, 1_000_000, THRESHOLD, table)
    small = verifier.verify_primorial_range(2, 7, THRESHOLD, table)
    ok = rep.ok and rep.total == 999_993 and small.exception_subjects == [2, 3, 4, 5, 6, 7]
    return ok, (
        f"k in [8, 10^6]: {len(rep.exceptions)} violations, {len(rep.unresolved)} unresolved, "
        f"max ratio {rep.max_ratio.ratio.hi:.6f} at k = {rep.max_ratio.subject}; "
        f"k in [2, 7] above: {small.exception_subjects}"
    )


def claim_tail_certificate(threads=None) -> tuple[bool, str]:
    cert = verifier.asymptotic_tail_certificate(THRESHOLD)
    try:
        verifier.asymptotic_tail_certificate("1.29887")
        floor_rejected = False
    except verifier.CertificateError:
        floor_rejected = True
    return cert.ok and floor_rejected, f"{cert.summary()}; 1.29887 rejected: {floor_rejected}"


def claim_corollaries(threads=None) -> tuple[bool, str]:
    se = scanner.scan_sigma_exp_exceptions(37, 9_699_692, THRESHOLD, threads=threads)
    dd = scanner.scan_d_dexp_exceptions(8, 9_699_692, THRESHOLD, threads=threads)
    ok = se.ok and dd.ok
    return ok, (
        f"sigma_e from 37: exceptions {se.exception_subjects}; "
        f"d*d_e from 8: exceptions {dd.exception_subjects}"
    )


def claim_minculete(threads=None) -> tuple[bool, str]:
    rep = scanner.scan_minculete(1, 10**7 + 1, threads=threads)
    return rep.ok, f"{rep.total} n checked, violations {rep.exception_subjects}"


def claim_derbal(threads=None) -> tuple[bool, str]:
    rep = scanner.scan_derbal(17, 10**7, threads=threads)
    return rep.ok, (
        f"exceptions {rep.exception_subjects}; max normalised ratio "
        f"{rep.max_ratio.ratio.hi:.6f} at n = {rep.max_ratio.subject}"
    )


def claim_equality(threads=None) -> tuple[bool, str]:
    found, secs = _timed(scanner.equality_search, 1, 10**6, threads=threads)
    per_witness = []
    for text in LARGE_WITNESSES:
        _, s = _timed(scanner.verify_witness, text)
        per_witness.append(s)
    ns = [w.n for w in found]
    ok = ns == PAPER_WITNESSES and secs < 30 and max(per_witness) < 1e-3
    return ok, (
        f"witnesses below 10^6: {ns} ({secs:.2f} s); large witnesses confirmed in "
        f"{', '.join(f'{s * 1e3:.3f} ms' for s in per_witness)}"
    )


def claim_density_baseline(threads=None) -> tuple[bool, str]:
    fixture = scanner.load_fixture("density_1e6.json")
    res = scanner.density_sigma_star_gt(10**6, threads=threads)
    ok = str(res.count) == fixture["count_sigma_star_gt_sigma_exp"] and res.proportion > 0.597
    return ok, f"count {res.count} (fixture {fixture['count_sigma_star_gt_sigma_exp']}), proportion {res.proportion}"


def claim_density_long(threads=None) -> tuple[bool, str]:
    counts = scanner.compare_sigma_star_exp(1, 10**9 + 1, threads=threads, long_run=True)
    prop = counts.greater / 10**9
    eq = [n for n in counts.equal_at if n != 1]
    ok = abs(prop - PAPER_DENSITY) <= 1e-6 and eq == PAPER_WITNESSES
    return ok, f"proportion {prop:.7f} (paper {PAPER_DENSITY}); equalities up to 10^9: {eq}"


def claim_oracle(threads=None, limit: int = 10**5, pairs: int = 10_000, seed: int = 2024) -> tuple[bool, str]:
    mismatches = []
    for n in range(1, limit + 1):
        f = arith.factorize(n)
        for kind, val in arith.brute_force_values(n).items():
            if kind(f) != val:
                mismatches.append((n, kind.value))
    rng = random.Random(seed)
    mult_bad = 0
    checked = 0
    while checked < pairs:
        m, n = rng.randint(1, 10**6), rng.randint(1, 10**6)
        fm, fn = arith.factorize(m), arith.factorize(n)
        if set(fm.primes) & set(fn.primes):
            continue
        fmn = fm * fn
        checked += 1
        if any(k(fmn) != k(fm) * k(fn) for k in DivisorFunctionKind):
            mult_bad += 1
    red_bad = sum(not verifier.reduction_step_check(rng.randint(6, 9_699_689)) for _ in range(pairs))
    ok = not mismatches and mult_bad == 0 and red_bad == 0
    return ok, (
        f"oracle mismatches {len(mismatches)} over n <= {limit}; "
        f"multiplicativity failures {mult_bad}/{checked}; reduction failures {red_bad}/{pairs}"
    )


def claim_constants(threads=None) -> tuple[bool, str]:
    table = analytic.BOUNDS
    B = analytic.compute_mertens_B(10**6, table.gamma)
    checks = {
        "computed B": B.truncates_to("0.26149") and B.width < 1e-5,
        "table B inside computed": table.B.subset_of(B) and table.B.width < 1e-10,
        "e^gamma": table.e_gamma.truncates_to("1.78107"),
        "e^B": table.e_B.truncates_to("1.29887"),
        "6e^gamma/pi^2": table.six_egamma_over_pi2.truncates_to("1.08"),
    }
    bad = [k for k, v in checks.items() if not v]
    return not bad, f"B in [{B.lo!r}, {B.hi!r}]; failing: {bad or 'none'}"


CLAIMS = [
    Claim("theorem-desk", "sigma* exceptions on [3, 9699691): largest is 570570", claim_theorem_desk, 60),
    Claim("exception-tail", "sigma* exceptions on [53132, 9699691) = {510510, 570570}", claim_exception_tail, 60),
    Claim("primorials", "primorial ratio <= 1.3007 for 8 <= k <= 10^6", claim_primorials, 120),
    Claim("tail-certificate", "A1/A2 <= 1.3007 for k >= 10^6, not 1.29887", claim_tail_certificate, 1),
    Claim("corollaries", "sigma_e bound from 37, d*d_e bound from 8", claim_corollaries, 90),
    Claim("minculete", "d*d_e <= sigma_e for n <= 10^7", claim_minculete, 60),
    Claim("derbal", "sigma/(sigma* loglog) < e^gamma on [17, 10^7)", claim_derbal, 60),
    Claim("equality", "sigma* = sigma_e witnesses", claim_equality, 30),
    Claim("density-baseline", "density fixture at 10^6", claim_density_baseline, 60),
    Claim("density-1e9", "density 0.778307 and equalities up to 10^9", claim_density_long, 3600, long_run=True),
    Claim("oracle", "closed forms vs brute force, multiplicativity, reduction step", claim_oracle, 30),
    Claim("constants", "certified B, e^gamma, e^B, 6e^gamma/pi^2", claim_constants, 10),
]


def run_claims(long_run: bool = False, threads: int | None = None, only: list[str] | None = None,
               progress: Callable[[ClaimResult], None] | None = None) -> list[ClaimResult]:
    results = []
    for claim in CLAIMS:
        if only and claim.name not in only:
            continue
        if claim.long_run and not long_run:
            res = ClaimResult(claim.name, "SKIPPED", "long-run only", 0.0)
        else:
            t0 = time.perf_counter()
            try:
                ok, detail = claim.check(threads=threads)
            except Exception as exc:  # a crashing claim is a failed claim
                ok, detail = False, f"{type(exc).__name__}: {exc}\n{traceback.format_exc(limit=3)}"
            secs = time.perf_counter() - t0
            res = ClaimResult(claim.name, "PASS" if ok else "FAIL", detail, secs)
        results.append(res)
        if progress is not None:
            progress(res)
    return results
