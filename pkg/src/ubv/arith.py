"""Exact divisor functions on factored integers.

Five multiplicative functions are provided, all returning Python ints:

    sigma      sum of divisors                 prod (p^(a+1) - 1) / (p - 1)
    sigma_star sum of unitary divisors         prod (1 + p^a)
    sigma_exp  sum of exponential divisors     prod sum_{b | a} p^b
    d          number of divisors              prod (a + 1)
    d_exp      number of exponential divisors  prod d(a)

A unitary divisor m of n has gcd(m, n/m) = 1. An exponential divisor of
n = prod p^a is prod p^b with every b dividing the matching a.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import gmpy2
import numpy as np

# Deterministic Miller-Rabin bases, valid below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
# Random rounds for larger declared primes: error below 4**-64 = 2**-128.
_MR_RANDOM_ROUNDS = 64

TRIAL_DIVISION_LIMIT = 2_097_152  # 2**21
ORACLE_LIMIT = 10**7

_SMALL_BOUND = 1000
_SMALL_PRIMES = tuple(p for p in range(2, _SMALL_BOUND) if all(p % q for q in range(2, math.isqrt(p) + 1)))
U64_MAX = 2**64 - 1


class FactorizationError(ValueError):
    """Raised for malformed factorizations or integers we refuse to factor."""


def is_prime(n: int) -> bool:
    """Miller-Rabin: deterministic below 3.3e24, error < 2**-128 above."""
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < _MR_DETERMINISTIC_LIMIT:
        return all(gmpy2.is_strong_prp(n, a) for a in _MR_BASES)
    rs = gmpy2.random_state(n & 0xFFFFFFFF)
    for _ in range(_MR_RANDOM_ROUNDS):
        a = int(gmpy2.mpz_random(rs, n - 3)) + 2
        if not gmpy2.is_strong_prp(n, a):
            return False
    return gmpy2.is_strong_selfridge_prp(n)


@dataclass(frozen=True)
class Factorization:
    """Canonical factorization: strictly increasing primes with positive exponents.

    Validated on construction. ``Factorization(())`` is the integer 1.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(p), int(a)) for p, a in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        prev = 1
        for p, a in pairs:
            if p <= prev:
                raise FactorizationError(f"primes must be strictly increasing, got {p} after {prev}")
            if not 1 <= a < 2**31:
                raise FactorizationError(f"exponent {a} of {p} outside [1, 2^31)")
            if not _is_prime_cached(p):
                raise FactorizationError(f"{p} is not prime")
            prev = p

    @classmethod
    def of(cls, n: int) -> Factorization:
        return factorize(n)

    @cached_property
    def value(self) -> int:
        v = 1
        for p, a in self.pairs:
            v *= p**a
        return v

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    @property
    def is_squarefree(self) -> bool:
        return all(a == 1 for _, a in self.pairs)

    def __mul__(self, other: Factorization) -> Factorization:
        merged: dict[int, int] = dict(self.pairs)
        for p, a in other.pairs:
            merged[p] = merged.get(p, 0) + a
        return Factorization(tuple(sorted(merged.items())))

    def __str__(self) -> str:
        if not self.pairs:
            return "1"
        return " * ".join(str(p) if a == 1 else f"{p}^{a}" for p, a in self.pairs)


@lru_cache(maxsize=65536)
def _is_prime_cached(p: int) -> bool:
    return is_prime(p)


_TERM = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_factorization(text: str) -> Factorization:
    """Parse ``"p1^a1 * p2^a2 * ..."``; ``^1`` may be omitted.

    Factors may come in any order and repeat; they are merged and validated.
    A bare integer without ``*`` or ``^`` is factorized instead.
    """
    text = text.strip()
    if not text:
        raise FactorizationError("empty factorization")
    if text.isdigit():
        return factorize(int(text))
    merged: dict[int, int] = {}
    for term in text.split("*"):
        m = _TERM.match(term)
        if m is None:
            raise FactorizationError(f"cannot parse factor {term.strip()!r}")
        p = int(m.group(1))
        a = int(m.group(2)) if m.group(2) is not None else 1
        if p == 1:
            continue
        if a == 0:
            continue
        merged[p] = merged.get(p, 0) + a
    return Factorization(tuple(sorted(merged.items())))


@lru_cache(maxsize=1)
def _trial_primes() -> np.ndarray:
    from .sieve import primes_up_to

    return primes_up_to(TRIAL_DIVISION_LIMIT).primes.astype(np.uint64)


def factorize(n: int) -> Factorization:
    """Factor a 64-bit integer by trial division up to 2^21 plus a primality test.

    Raises FactorizationError when the cofactor left after trial division is
    composite, i.e. n has two prime factors above 2^21; supply an explicit
    Factorization for such inputs.
    """
    n = int(n)
    if n < 1:
        raise FactorizationError("factorize requires n >= 1")
    if n > U64_MAX:
        raise FactorizationError("factorize is limited to 64-bit inputs; pass an explicit Factorization")
    pairs = []
    rem = n
    for p in _SMALL_PRIMES:
        if p * p > rem:
            break
        if rem % p == 0:
            a = 0
            while rem % p == 0:
                rem //= p
                a += 1
            pairs.append((p, a))
    if rem > 1 and rem >= _SMALL_BOUND**2 and not is_prime(rem):
        # at least two prime factors left, all >= _SMALL_BOUND
        primes = _trial_primes()
        primes = primes[: np.searchsorted(primes, math.isqrt(rem), side="right")]
        hits = primes[np.uint64(rem) % primes == 0]
        for p in hits.tolist():
            a = 0
            while rem % p == 0:
                rem //= p
                a += 1
            pairs.append((p, a))
        if rem > 1 and rem > TRIAL_DIVISION_LIMIT**2 and not is_prime(rem):
            raise FactorizationError(
                f"{n} has a composite cofactor {rem} beyond trial division; "
                "supply an explicit Factorization"
            )
    if rem > 1:
        pairs.append((rem, 1))
    pairs.sort()
    return Factorization(tuple(pairs))


def _as_factorization(f) -> Factorization:
    if isinstance(f, Factorization):
        return f
    return factorize(f)


def sigma(f: Factorization | int) -> int:
    out = 1
    for p, a in _as_factorization(f).pairs:
        out *= (p ** (a + 1) - 1) // (p - 1)
    return out


def sigma_star(f: Factorization | int) -> int:
    out = 1
    for p, a in _as_factorization(f).pairs:
        out *= 1 + p**a
    return out


def sigma_exp(f: Factorization | int) -> int:
    # sigma_exp(1) = 1 as the empty product
    out = 1
    for p, a in _as_factorization(f).pairs:
        out *= sum(p**b for b in divisors_of_small(a))
    return out


def d(f: Factorization | int) -> int:
    out = 1
    for _, a in _as_factorization(f).pairs:
        out *= a + 1
    return out


def d_exp(f: Factorization | int) -> int:
    out = 1
    for _, a in _as_factorization(f).pairs:
        out *= len(divisors_of_small(a))
    return out


@lru_cache(maxsize=256)
def divisors_of_small(a: int) -> tuple[int, ...]:
    return tuple(b for b in range(1, a + 1) if a % b == 0)


class DivisorFunctionKind(enum.Enum):
    SIGMA = "sigma"
    SIGMA_STAR = "sigma_star"
    SIGMA_EXP = "sigma_exp"
    D = "d"
    D_EXP = "d_exp"

    def __call__(self, f: Factorization | int) -> int:
        return _EVALUATORS[self](f)


_EVALUATORS = {
    DivisorFunctionKind.SIGMA: sigma,
    DivisorFunctionKind.SIGMA_STAR: sigma_star,
    DivisorFunctionKind.SIGMA_EXP: sigma_exp,
    DivisorFunctionKind.D: d,
    DivisorFunctionKind.D_EXP: d_exp,
}


def evaluate(kind: DivisorFunctionKind, f: Factorization | int) -> int:
    return _EVALUATORS[kind](f)


# -- brute-force oracle -------------------------------------------------------
#
# Deliberately avoids the closed forms: divisors come from trial division up
# to sqrt(n), unitary and exponential divisors are filtered by definition.


def _all_divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _prime_exponents(n: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _is_exponential_divisor(m: int, exps: dict[int, int]) -> bool:
    # m | n assumed; b must be >= 1 and divide a for every prime of n
    for p, a in exps.items():
        b = 0
        while m % p == 0:
            m //= p
            b += 1
        if b == 0 or a % b:
            return False
    return True


def brute_force_values(n: int) -> dict[DivisorFunctionKind, int]:
    """All five functions at n from one explicit divisor enumeration."""
    n = int(n)
    if not 1 <= n <= ORACLE_LIMIT:
        raise ValueError(f"oracle restricted to 1 <= n <= {ORACLE_LIMIT}, got {n}")
    divs = _all_divisors(n)
    exps = _prime_exponents(n)
    unitary = [m for m in divs if math.gcd(m, n // m) == 1]
    exponential = [m for m in divs if _is_exponential_divisor(m, exps)]
    return {
        DivisorFunctionKind.SIGMA: sum(divs),
        DivisorFunctionKind.D: len(divs),
        DivisorFunctionKind.SIGMA_STAR: sum(unitary),
        DivisorFunctionKind.SIGMA_EXP: sum(exponential),
        DivisorFunctionKind.D_EXP: len(exponential),
    }


def brute_force_divisor_oracle(n: int, kind: DivisorFunctionKind) -> int:
    """Evaluate ``kind`` at n by enumerating divisors (no multiplicativity used)."""
    return brute_force_values(n)[kind]
