import math
import random

import numpy as np
import pytest

from ubv import analytic
from ubv import interval as iv
from ubv.analytic import A1, A2, BOUNDS, DomainError, mertens_upper, ratio_bound, theta_lower
from ubv.interval import DirectedValue


def test_ratio_bound_at_millionth_prime():
    r = ratio_bound(15_485_863)
    assert r.hi <= 1.3007
    assert r.truncates_to("1.30064")
    assert r.width < 1e-12


def test_ratio_bound_too_weak_at_theta_cutoff():
    assert ratio_bound(10_544_111).lo > 1.3007


def test_dusart_variant_is_tighter():
    for x in (10**7, 15_485_863, 10**9):
        assert A1(x, "dusart").hi < A1(x, "printed").lo


def test_variant_name_checked():
    with pytest.raises(ValueError):
        A1(10**7, "other")


@pytest.mark.parametrize(
    "fn, x",
    [
        (mertens_upper, 10_371),
        (A1, 10_000),
        (theta_lower, 10_544_110),
        (A2, 10**6),
        (ratio_bound, 10**7),
    ],
)
def test_domain_errors(fn, x):
    with pytest.raises(DomainError):
        fn(x)


def test_chain_identities_on_samples():
    rng = random.Random(11)
    for _ in range(100):
        x = DirectedValue.exact(rng.randint(10_544_111, 10**12))
        L = iv.log(x)
        via_mertens = iv.exp(mertens_upper(x) - iv.log(L))
        # the L^3 variant is exactly exp(mertens_upper - loglog), the printed one dominates it
        assert A1(x, "dusart").lo <= via_mertens.hi and via_mertens.lo <= A1(x, "dusart").hi
        assert A1(x, "printed").lo >= via_mertens.lo
        # log theta_lower(x) = L * A2(x)
        lhs = iv.log(theta_lower(x))
        rhs = L * A2(x)
        assert lhs.lo <= rhs.hi and rhs.lo <= lhs.hi


def test_ratio_bound_decreasing_on_grid():
    grid = np.geomspace(10_544_111, 1e12, 40)
    his = [ratio_bound(int(x)).hi for x in grid]
    los = [ratio_bound(int(x)).lo for x in grid]
    assert all(los[i] > his[i + 1] for i in range(len(grid) - 1))


def test_mertens_upper_dominates_true_sum(table_1e6):
    primes = table_1e6.primes
    for x in (10**5, 10**6, 10**7):
        s = math.fsum(1.0 / p for p in primes[primes <= x].tolist())
        assert s <= mertens_upper(x).hi
        # and it is not vacuous
        assert mertens_upper(x).hi - s < 1e-3


def test_theta_lower_below_true_theta(table_1e6):
    primes = table_1e6.primes
    for x in (10_544_111, 11_000_000, 15_485_863):
        theta = math.fsum(math.log(p) for p in primes[primes <= x].tolist())
        assert theta_lower(x).lo <= theta
        assert theta - theta_lower(x).lo < 0.01 * x


def test_computed_B_nested_and_contains_table():
    e5 = analytic.compute_mertens_B(10**5)
    e6 = analytic.compute_mertens_B(10**6)
    assert e6.subset_of(e5)
    assert BOUNDS.B.subset_of(e6)
    assert e6.width < e5.width


def test_compute_B_rejects_small_cutoff():
    with pytest.raises(ValueError):
        analytic.compute_mertens_B(10**4)


def test_derived_constants():
    assert BOUNDS.e_gamma.truncates_to("1.78107")
    assert BOUNDS.e_B.truncates_to("1.29887")
    assert BOUNDS.six_egamma_over_pi2.truncates_to("1.08")
    assert BOUNDS.gamma.contains("0.57721566490153286060651209")
