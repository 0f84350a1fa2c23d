import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ubv import arith
from ubv.sieve import (
    SieveResourceError,
    enumerate_factored,
    factor_segment,
    map_segments,
    partition_range,
    primes_up_to,
    segment_functions,
)


def naive_primes(limit):
    flags = [True] * (limit + 1)
    flags[0] = flags[1] = False
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            for j in range(i * i, limit + 1, i):
                flags[j] = False
    return [i for i, f in enumerate(flags) if f]


def test_small_table():
    t = primes_up_to(19)
    assert t.primes.tolist() == [2, 3, 5, 7, 11, 13, 17, 19]
    assert t.prime_at(1) == 2 and t.prime_at(8) == 19
    assert t.pi(18) == 7 and t.pi(1) == 0
    assert 17 in t and 15 not in t


def test_pi_1e6_matches_reference():
    t = primes_up_to(10**6)
    assert len(t) == 78498
    assert t.primes.tolist() == naive_primes(10**6)


def test_millionth_prime(table_1e6):
    assert len(table_1e6) == 10**6
    assert table_1e6.prime_at(10**6) == 15_485_863


def test_prime_at_out_of_range():
    with pytest.raises(IndexError):
        primes_up_to(19).prime_at(9)
    with pytest.raises(IndexError):
        primes_up_to(19).prime_at(0)


def _collect(lo, hi):
    out = []
    enumerate_factored(lo, hi, lambda n, f: out.append((n, f)))
    return out


def test_enumerate_examples():
    got = dict(_collect(1, 13))
    assert list(got) == list(range(1, 13))
    assert got[1].pairs == ()
    assert got[12].pairs == ((2, 2), (3, 1))


def test_enumerate_around_570570():
    got = _collect(570_560, 570_580)
    assert [n for n, _ in got] == list(range(570_560, 570_580))
    for n, f in got:
        assert f == arith.factorize(n)
    assert dict(got)[570_570].primes == (2, 3, 5, 7, 11, 13, 19)


def test_enumerate_single_primorial():
    [(n, f)] = _collect(9_699_690, 9_699_691)
    assert n == 9_699_690
    assert f.primes == (2, 3, 5, 7, 11, 13, 17, 19)


def test_enumerate_small_segments_agree():
    a, b = [], []
    enumerate_factored(1000, 3000, lambda n, f: a.append(f), segment_size=7)
    enumerate_factored(1000, 3000, lambda n, f: b.append(f))
    assert a == b


def test_range_errors():
    with pytest.raises(ValueError):
        _collect(5, 5)
    with pytest.raises(ValueError):
        _collect(0, 5)
    with pytest.raises(SieveResourceError):
        factor_segment(10**12, 10**12 + 2)


def test_factor_segment_large_values():
    lo = 10**12 - 1000
    seg = factor_segment(lo, 10**12 + 1)
    for n in (lo, lo + 17, 10**12):
        assert seg.factorization(n) == arith.factorize(n)


def test_partition_examples():
    assert partition_range(0, 10, 3) == [(0, 4), (4, 7), (7, 10)]
    assert partition_range(5, 7, 4) == [(5, 6), (6, 7)]
    with pytest.raises(ValueError):
        partition_range(3, 3, 2)


@given(st.integers(1, 10**6), st.integers(1, 5000), st.integers(1, 64))
def test_partition_covers(lo, length, parts):
    pieces = partition_range(lo, lo + length, parts)
    assert pieces[0][0] == lo and pieces[-1][1] == lo + length
    assert all(a < b for a, b in pieces)
    assert all(pieces[i][1] == pieces[i + 1][0] for i in range(len(pieces) - 1))
    sizes = [b - a for a, b in pieces]
    assert max(sizes) - min(sizes) <= 1


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 10**7), st.integers(1, 3000))
def test_segment_functions_match_closed_forms(lo, length):
    kinds = {"sigma", "sigma_star", "sigma_exp", "d", "d_exp"}
    vals = segment_functions(lo, lo + length, kinds)
    step = max(1, length // 50)
    for n in range(lo, lo + length, step):
        f = arith.factorize(n)
        for k in arith.DivisorFunctionKind:
            assert vals[k.value][n - lo] == k(f), (n, k)


def test_segment_functions_rejects_unknown():
    with pytest.raises(ValueError):
        segment_functions(1, 10, {"phi"})


def test_map_segments_order_and_threads():
    work = lambda a, b, primes: int(segment_functions(a, b, {"d"}, primes)["d"].sum())
    one = map_segments(1, 200_001, work, segment_size=30_000, threads=1)
    many = map_segments(1, 200_001, work, segment_size=30_000, threads=4)
    assert one == many
    assert sum(one) == int(segment_functions(1, 200_001, {"d"})["d"].sum())
    assert isinstance(one[0], (int, np.integer))
