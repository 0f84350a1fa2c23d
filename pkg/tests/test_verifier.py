import math
from fractions import Fraction

import mpmath
import pytest

from ubv import verifier
from ubv.records import Verdict, classify
from ubv.sieve import primes_up_to
from ubv.verifier import (
    CertificateError,
    PrimorialState,
    asymptotic_tail_certificate,
    load_checkpoints,
    primorial_ratio,
    reduction_step_check,
    state_at,
    verify_primorial_range,
)

SMALL = primes_up_to(1000)


def reference_ratio(k):
    # independent 300-bit evaluation straight from the primorial
    primes = SMALL.primes[:k].tolist()
    n = math.prod(primes)
    s = math.prod(p + 1 for p in primes)
    with mpmath.workprec(300):
        return mpmath.mpf(s) / (mpmath.mpf(n) * mpmath.log(mpmath.log(n)))


@pytest.mark.parametrize("k", range(2, 21))
def test_small_k_against_reference(k):
    rec = primorial_ratio(k, SMALL)
    with mpmath.workprec(300):
        ref = Fraction(*mpmath.libmp.to_rational(reference_ratio(k)._mpf_))
    assert rec.ratio.contains(ref)
    assert rec.exact
    expected = Verdict.ABOVE if k <= 7 else Verdict.BELOW
    assert rec.verdict is expected


def test_interval_path_agrees_with_exact_path():
    # above k = 20 the float interval path is used; compare at the seam
    for k in (21, 25, 40):
        rec = primorial_ratio(k, SMALL)
        enc = verifier.exact_primorial_ratio(k, SMALL)
        lo, hi = verifier.exact.endpoints(enc)
        assert not rec.exact
        assert rec.ratio.lo <= hi and lo <= rec.ratio.hi
        assert rec.ratio.width < 1e-12


def test_k_below_two_rejected():
    with pytest.raises(ValueError):
        primorial_ratio(1, SMALL)


def test_verdict_trichotomy():
    r8 = primorial_ratio(8, SMALL).ratio
    assert primorial_ratio(8, SMALL, threshold=Fraction(r8.hi) * 2).verdict is Verdict.BELOW
    assert primorial_ratio(8, SMALL, threshold=Fraction(r8.lo) / 2).verdict is Verdict.ABOVE
    # a threshold strictly inside the enclosure cannot be decided
    assert classify(r8, (Fraction(r8.lo) + Fraction(r8.hi)) / 2) is Verdict.INDETERMINATE
    assert primorial_ratio(8, SMALL, threshold="1.3125").verdict is Verdict.BELOW
    assert primorial_ratio(7, SMALL, threshold="1.3125").verdict is Verdict.ABOVE


def test_small_range_all_violate():
    rep = verify_primorial_range(2, 7, "1.3007", SMALL)
    assert rep.exception_subjects == [2, 3, 4, 5, 6, 7]
    assert rep.total == 6


def test_k8_only_at_looser_threshold():
    rep = verify_primorial_range(8, 8, "1.3125", SMALL)
    assert rep.exceptions == [] and rep.total == 1


def test_resummation_stable_at_1e6(table_1e6):
    st = state_at(10**6, table_1e6)
    assert st.sum_log1p.width < 1e-6
    assert st.theta.width < 1e-2 * 1e-6 * st.theta.lo
    r = st.ratio()
    assert r.hi <= 1.3007 and r.width < 1e-7


def test_checkpoint_resume(tmp_path):
    table = primes_up_to(200_000)
    path = tmp_path / "ck.txt"
    full = verify_primorial_range(8, 15_000, "1.3007", table, checkpoint_path=path, checkpoint_every=5000)
    states = load_checkpoints(path)
    assert [s.k for s in states] == [5000, 10_000, 15_000]
    assert PrimorialState.from_line(states[0].to_line()) == states[0]
    resumed = verify_primorial_range(10_001, 15_000, "1.3007", table, start=states[1])
    assert resumed.extra["final_state"] == full.extra["final_state"]
    assert resumed.total == 5000 and resumed.ok


def test_start_must_precede_range():
    st = state_at(100, SMALL)
    with pytest.raises(ValueError):
        verify_primorial_range(50, 120, "1.3007", SMALL, start=st)


def test_tail_certificate_passes_and_fails():
    cert = asymptotic_tail_certificate("1.31")
    assert cert.ok and cert.grid_monotone and len(cert.grid) == 32
    with pytest.raises(CertificateError) as err:
        asymptotic_tail_certificate("1.29887")
    assert err.value.certificate is not None
    assert not err.value.certificate.ratio_ok


def test_tail_certificate_dusart_variant():
    a = asymptotic_tail_certificate("1.3007", variant="dusart")
    b = asymptotic_tail_certificate("1.3007")
    assert a.ratio_at_p_k0.hi < b.ratio_at_p_k0.lo


@pytest.mark.parametrize("n", [42, 2310, 510510, 6, 9_699_689, 570_570])
def test_reduction_examples(n):
    assert reduction_step_check(n)


def test_reduction_range():
    with pytest.raises(ValueError):
        reduction_step_check(5)
