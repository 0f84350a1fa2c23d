"""Prime tables and segmented factor sieves.

The segmented kernels divide every integer of a half-open window [lo, hi) by
the sieving primes below sqrt(hi); whatever is left above 1 is a single
prime. Memory is O(segment + pi(sqrt(hi))) regardless of the range size.
Kernels release the GIL, so segments run concurrently on a thread pool.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
from numba import njit

from .arith import Factorization

DEFAULT_SEGMENT_SIZE = 1 << 22
ENUMERATE_SEGMENT_SIZE = 1 << 16
RANGE_CEILING = 10**12
# odd-only bytearray of limit/2 bytes
MAX_TABLE_LIMIT = 1 << 33


class SieveResourceError(MemoryError):
    """A sieve request exceeds the configured memory budget or design ceiling."""


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray  # int64, ascending

    def __len__(self) -> int:
        return len(self.primes)

    def prime_at(self, k: int) -> int:
        """k-th prime, 1-based: prime_at(1) == 2."""
        if not 1 <= k <= len(self.primes):
            raise IndexError(f"table up to {self.limit} holds {len(self.primes)} primes, asked for p_{k}")
        return int(self.primes[k - 1])

    def pi(self, x: int) -> int:
        """Number of primes <= x (x must not exceed the table limit)."""
        if x > self.limit:
            raise ValueError(f"pi({x}) beyond table limit {self.limit}")
        return int(np.searchsorted(self.primes, x, side="right"))

    def __contains__(self, n: int) -> bool:
        i = np.searchsorted(self.primes, n)
        return i < len(self.primes) and int(self.primes[i]) == n


def primes_up_to(limit: int) -> PrimeTable:
    """All primes <= limit by an odd-only sieve of Eratosthenes."""
    limit = int(limit)
    if limit < 2:
        raise ValueError("limit must be >= 2")
    if limit > MAX_TABLE_LIMIT:
        raise SieveResourceError(f"prime table limit {limit} exceeds budget {MAX_TABLE_LIMIT}")
    # index i stands for 2i+1
    size = (limit - 1) // 2 + 1
    odd = np.ones(size, dtype=np.bool_)
    odd[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2 :: p] = False
    primes = np.concatenate(([2], 2 * np.flatnonzero(odd) + 1)).astype(np.int64)
    return PrimeTable(limit, primes)


def sieving_primes(hi: int) -> np.ndarray:
    """Primes p with p*p < hi, enough to factor every n < hi."""
    r = max(2, math.isqrt(max(hi - 1, 1)))
    return primes_up_to(r).primes


# -- numba kernels ----------------------------------------------------------------


@njit(nogil=True, cache=True)
def _factor_segment(lo, hi, primes, width):
    n_len = hi - lo
    rem = np.arange(lo, hi).astype(np.int64)
    count = np.zeros(n_len, dtype=np.int64)
    fp = np.zeros((n_len, width), dtype=np.int64)
    fa = np.zeros((n_len, width), dtype=np.int64)
    for p in primes:
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        for m in range(start, hi, p):
            i = m - lo
            r = rem[i] // p
            a = 1
            while r % p == 0:
                r //= p
                a += 1
            rem[i] = r
            c = count[i]
            fp[i, c] = p
            fa[i, c] = a
            count[i] = c + 1
    for i in range(n_len):
        if rem[i] > 1:
            c = count[i]
            fp[i, c] = rem[i]
            fa[i, c] = 1
            count[i] = c + 1
    return count, fp, fa


@njit(nogil=True, cache=True)
def _segment_functions(lo, hi, primes, want_sigma, want_star, want_exp, want_d, want_dexp):
    n_len = hi - lo
    rem = np.arange(lo, hi).astype(np.int64)
    s = np.ones(n_len if want_sigma else 0, dtype=np.int64)
    st = np.ones(n_len if want_star else 0, dtype=np.int64)
    se = np.ones(n_len if want_exp else 0, dtype=np.int64)
    dd = np.ones(n_len if want_d else 0, dtype=np.int64)
    de = np.ones(n_len if want_dexp else 0, dtype=np.int64)
    for p in primes:
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        for m in range(start, hi, p):
            i = m - lo
            r = rem[i] // p
            a = 1
            pa = p
            while r % p == 0:
                r //= p
                a += 1
                pa *= p
            rem[i] = r
            if want_sigma:
                s[i] *= (pa * p - 1) // (p - 1)
            if want_star:
                st[i] *= 1 + pa
            if want_exp:
                acc = 0
                pb = 1
                for b in range(1, a + 1):
                    pb *= p
                    if a % b == 0:
                        acc += pb
                se[i] *= acc
            if want_d:
                dd[i] *= a + 1
            if want_dexp:
                k = 0
                for b in range(1, a + 1):
                    if a % b == 0:
                        k += 1
                de[i] *= k
    for i in range(n_len):
        r = rem[i]
        if r > 1:
            if want_sigma:
                s[i] *= 1 + r
            if want_star:
                st[i] *= 1 + r
            if want_exp:
                se[i] *= r
            if want_d:
                dd[i] *= 2
    return s, st, se, dd, de


# -- segments -----------------------------------------------------------------


def _max_distinct_primes(hi: int) -> int:
    # the smallest n with w distinct primes is the w-th primorial
    w, prod, p = 0, 1, 2
    while True:
        if p == 2 or all(p % q for q in range(2, math.isqrt(p) + 1)):
            if prod * p >= hi:
                return max(w, 1)
            prod *= p
            w += 1
        p += 1


@dataclass(frozen=True)
class Segment:
    """Factorizations of every integer in [lo, hi), stored as padded rows."""

    lo: int
    hi: int
    count: np.ndarray
    primes: np.ndarray
    exponents: np.ndarray

    def factorization(self, n: int) -> Factorization:
        if not self.lo <= n < self.hi:
            raise IndexError(f"{n} outside segment [{self.lo}, {self.hi})")
        i = n - self.lo
        c = int(self.count[i])
        pairs = tuple(zip(self.primes[i, :c].tolist(), self.exponents[i, :c].tolist()))
        return Factorization(pairs)

    def __iter__(self) -> Iterator[tuple[int, Factorization]]:
        for n in range(self.lo, self.hi):
            yield n, self.factorization(n)


def _check_range(lo: int, hi: int):
    if not 1 <= lo < hi:
        raise ValueError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    if hi > RANGE_CEILING + 1:
        raise SieveResourceError(f"hi = {hi} exceeds the 10^12 design ceiling")


def factor_segment(lo: int, hi: int, primes: np.ndarray | None = None) -> Segment:
    _check_range(lo, hi)
    if primes is None:
        primes = sieving_primes(hi)
    count, fp, fa = _factor_segment(lo, hi, primes, _max_distinct_primes(hi))
    return Segment(lo, hi, count, fp, fa)


def iter_segments(lo: int, hi: int, segment_size: int) -> Iterator[tuple[int, int]]:
    for a in range(lo, hi, segment_size):
        yield a, min(a + segment_size, hi)


def enumerate_factored(
    lo: int,
    hi: int,
    visit: Callable[[int, Factorization], None],
    segment_size: int = ENUMERATE_SEGMENT_SIZE,
) -> None:
    """Call ``visit(n, factorization)`` once for every n in [lo, hi), ascending."""
    _check_range(lo, hi)
    if segment_size < 1:
        raise ValueError("segment_size must be positive")
    primes = sieving_primes(hi)
    for a, b in iter_segments(lo, hi, segment_size):
        try:
            seg = factor_segment(a, b, primes)
        except MemoryError as exc:
            raise SieveResourceError(f"segment [{a}, {b}) could not be allocated") from exc
        for n, f in seg:
            visit(n, f)


def segment_functions(
    lo: int,
    hi: int,
    kinds: set[str],
    primes: np.ndarray | None = None,
) -> dict[str, np.ndarray]:
    """Exact int64 arrays of the requested functions for n in [lo, hi).

    ``kinds`` is a subset of {"sigma", "sigma_star", "sigma_exp", "d", "d_exp"}.
    """
    _check_range(lo, hi)
    unknown = set(kinds) - {"sigma", "sigma_star", "sigma_exp", "d", "d_exp"}
    if unknown:
        raise ValueError(f"unknown function kinds {sorted(unknown)}")
    if primes is None:
        primes = sieving_primes(hi)
    try:
        out = _segment_functions(
            lo, hi, primes,
            "sigma" in kinds, "sigma_star" in kinds, "sigma_exp" in kinds,
            "d" in kinds, "d_exp" in kinds,
        )
    except MemoryError as exc:
        raise SieveResourceError(f"segment [{lo}, {hi}) could not be allocated") from exc
    names = ("sigma", "sigma_star", "sigma_exp", "d", "d_exp")
    return {k: v for k, v in zip(names, out) if k in kinds}


def partition_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split [lo, hi) into at most ``parts`` ordered, disjoint, near-equal pieces.

    Empty pieces are dropped, so fewer than ``parts`` come back when the range
    is shorter than ``parts``.
    """
    if lo >= hi:
        raise ValueError(f"empty range [{lo}, {hi})")
    if parts < 1:
        raise ValueError("parts must be >= 1")
    total = hi - lo
    q, r = divmod(total, parts)
    out = []
    a = lo
    for i in range(parts):
        b = a + q + (1 if i < r else 0)
        if b > a:
            out.append((a, b))
        a = b
    return out


def default_threads() -> int:
    env = os.environ.get("UBV_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def map_segments(
    lo: int,
    hi: int,
    work: Callable[[int, int, np.ndarray], object],
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int | None = None,
) -> list:
    """Run ``work(a, b, sieving_primes)`` on every segment, results in range order."""
    _check_range(lo, hi)
    if segment_size < 1:
        raise ValueError("segment_size must be positive")
    primes = sieving_primes(hi)
    spans = list(iter_segments(lo, hi, segment_size))
    threads = threads or default_threads()
    if threads == 1 or len(spans) == 1:
        return [work(a, b, primes) for a, b in spans]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ab: work(ab[0], ab[1], primes), spans))
