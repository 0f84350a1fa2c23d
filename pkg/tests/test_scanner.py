import json
import math
from fractions import Fraction

import pytest

from ubv import arith, scanner
from ubv.records import Verdict, merge_reports
from ubv.scanner import (
    EqualityWitness,
    ScanLimitError,
    WitnessError,
    compare_sigma_star_exp,
    density_sigma_star_gt,
    equality_search,
    scan_d_dexp_exceptions,
    scan_derbal,
    scan_minculete,
    scan_sigma_exp_exceptions,
    scan_sigma_star_exceptions,
    threshold_scan,
    verify_witness,
)


def brute_exceptions(fn, lo, hi, c=1.3007):
    # float reference with a wide berth; none of the small cases sit near c
    return [n for n in range(max(lo, 3), hi) if fn(n) > c * n * math.log(math.log(n))]


def test_sigma_star_small_range_matches_brute_force():
    rep = scan_sigma_star_exceptions(3, 5000)
    assert rep.exception_subjects == brute_exceptions(arith.sigma_star, 3, 5000)
    assert rep.unresolved == [] and rep.audited > 0


def test_sigma_exp_small_exceptions():
    rep = scan_sigma_exp_exceptions(3, 2000)
    assert rep.exception_subjects == [3, 4, 5, 6, 7, 8, 9, 12, 16, 20, 36]
    assert scan_sigma_exp_exceptions(37, 100_000).ok


def test_d_dexp_small_exceptions():
    rep = scan_d_dexp_exceptions(3, 100_000)
    assert rep.exception_subjects == [3, 4, 8]
    assert rep.extra["minculete_violations"] == []


def test_n8_is_a_d_dexp_exception():
    # d(8) d_e(8) = 4 * 2 = 8 and 1.3007 * 8 * log log 8 is about 7.62
    assert arith.d(8) * arith.d_exp(8) == 8
    rec = scan_d_dexp_exceptions(8, 9).exceptions[0]
    assert rec.subject == 8 and rec.verdict is Verdict.ABOVE
    assert rec.ratio.truncates_to("1.3659")
    assert scan_d_dexp_exceptions(9, 1_000_000).ok


def test_derbal_small_exceptions_and_spot_check():
    assert scan_derbal(3, 1000).exception_subjects == [3, 4, 5, 8, 16]
    n = 2**10
    value = arith.sigma(n) / (scanner.EGAMMA_FLOAT * arith.sigma_star(n) * math.log(math.log(n)))
    rep = scan_derbal(n, n + 1, audit=0)
    assert rep.max_ratio.ratio.lo <= value * (1 + 1e-12)
    assert rep.max_ratio.ratio.hi >= value * (1 - 1e-12)
    assert rep.ok


def test_exclusions_recorded():
    rep = scan_sigma_star_exceptions(1, 50)
    assert [n for n, _ in rep.excluded] == [1, 2]
    assert rep.total == 47
    assert rep.satisfying + len(rep.exceptions) + len(rep.unresolved) == rep.total


def test_report_deterministic_and_partition_invariant():
    a = threshold_scan("sigma-star", 3, 200_000, "1.3007", threads=1, segment_size=200_000, audit=0)
    b = threshold_scan("sigma-star", 3, 200_000, "1.3007", threads=3, segment_size=12_345, audit=0)
    assert a.to_json(runtime=False) == b.to_json(runtime=False)
    c = threshold_scan("sigma-star", 3, 200_000, "1.3007", threads=1, segment_size=200_000, audit=0)
    assert a.to_json(runtime=False) == c.to_json(runtime=False)


def test_merge_rejects_gaps():
    a = scan_sigma_star_exceptions(3, 100, audit=0)
    b = scan_sigma_star_exceptions(101, 200, audit=0)
    with pytest.raises(ValueError):
        merge_reports([a, b])


def test_json_numbers_are_strings():
    d = json.loads(scan_sigma_star_exceptions(3, 1000).to_json())
    assert d["range"] == ["3", "1000"] and isinstance(d["threshold"], str)
    first = d["exceptions"][0]
    assert first["n"] == "3" and first["verdict"] == "ABOVE"
    assert float(first["ratio_lo"]) <= float(first["ratio_hi"])


def test_limits():
    with pytest.raises(ScanLimitError):
        scan_sigma_star_exceptions(3, 10**7 + 2)
    with pytest.raises(ValueError):
        scan_sigma_star_exceptions(10, 10)
    with pytest.raises(ValueError):
        scan_sigma_star_exceptions(3, 100, threshold="-1")


def test_float_threshold_read_exactly():
    assert scanner.as_threshold(1.3007) == scanner.as_threshold("1.3007")


def test_minculete_small():
    rep = scan_minculete(1, 100_000)
    assert rep.ok and rep.total == 99_999


def test_witness_examples():
    w = verify_witness(20)
    assert isinstance(w, EqualityWitness) and w.common_value == 30
    with pytest.raises(WitnessError) as err:
        verify_witness(12)
    assert (err.value.sigma_star, err.value.sigma_exp) == (20, 18)
    big = verify_witness("2^49 * 4363953127297")
    assert big.n == 2**49 * 4363953127297
    assert verify_witness(680_890_228_200).n == 680_890_228_200


def test_witness_construction_rechecks():
    with pytest.raises(WitnessError):
        EqualityWitness(12, arith.factorize(12), 20)


def test_equality_search_small():
    assert [w.n for w in equality_search(1, 10_000)] == [20, 45, 320, 6615]
    assert [w.n for w in equality_search(1, 100, include_one=True)] == [1, 20, 45]


def test_comparison_counts_add_up():
    c = compare_sigma_star_exp(1, 10_001)
    assert c.greater + c.equal + c.less == 10_000
    by_hand = sum(arith.sigma_star(n) > arith.sigma_exp(n) for n in range(1, 10_001))
    assert c.greater == by_hand


def test_density_small():
    res = density_sigma_star_gt(10_000)
    assert res.proportion > 0.597
    assert res.exact_proportion == Fraction(res.count, 10_000)
    with pytest.raises(ValueError):
        density_sigma_star_gt(999)


def test_fixtures_load():
    fx = scanner.load_fixture("density_1e6.json")
    assert fx["count_sigma_star_gt_sigma_exp"] == "778337"


def test_long_fixture_consistent():
    fx = scanner.load_fixture("density_1e9.json")
    total = sum(int(fx[k]) for k in ("count_sigma_star_gt_sigma_exp", "count_equal", "count_less"))
    assert total == 10**9
    assert abs(float(fx["proportion"]) - 0.778307) <= 1e-6
    # the long fixture extends the short one
    assert [int(n) for n in fx["equal_at"]][1:] == [w.n for w in equality_search(1, 10**6)]
