"""Exact integer and modular arithmetic.

Everything here works on Python integers, so there is no overflow to guard
against.  Inputs to :func:`factorize` are capped at ``10**12``: trial
division by primes up to ``10**6`` then fully factors the input, and the
surviving cofactor is confirmed prime by deterministic Miller-Rabin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

import numpy as np

FACTORIZE_LIMIT = 10**12
_TRIAL_LIMIT = 10**6
# Deterministic for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class DomainError(ValueError):
    """Argument outside the domain of an arithmetic function."""


class NotInvertibleError(DomainError):
    """Residue has no inverse modulo the given modulus."""


class ResidueClass(NamedTuple):
    residue: int
    modulus: int


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise DomainError(f"malformed factor list {self.factors}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise DomainError(f"factors {self.factors} do not multiply to {self.value}")

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def prime_powers(self) -> list[int]:
        return [p**e for p, e in self.factors]


def _check_positive(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise DomainError(f"expected an integer, got {n!r}")
    if n < 1:
        raise DomainError(f"expected a positive integer, got {n}")


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for every n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=8)
def _sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return np.flatnonzero(flags)


def small_primes(limit: int = _TRIAL_LIMIT) -> np.ndarray:
    return _sieve(int(limit))


@lru_cache(maxsize=1)
def _trial_primes() -> list[int]:
    return _sieve(_TRIAL_LIMIT).tolist()


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    """Prime factorization of ``1 <= n <= 10**12``."""
    _check_positive(n)
    n = int(n)
    if n > FACTORIZE_LIMIT:
        raise DomainError(f"factorize is limited to n <= {FACTORIZE_LIMIT}, got {n}")
    factors = []
    m = n
    for p in _trial_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1:
        # every composite <= 10**12 has a prime factor <= 10**6
        assert is_probable_prime(m), m
        factors.append((m, 1))
    return Factorization(n, tuple(factors))


def euler_phi(n: int) -> int:
    result = 1
    for p, e in factorize(n):
        result *= (p - 1) * p ** (e - 1)
    return result


def moebius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def num_divisors(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(n))


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def radical(n: int) -> int:
    return math.prod(factorize(n).primes)


def mod_inverse(a: int, c: int) -> int:
    """The inverse of ``a`` modulo ``c`` in ``[0, c)``.

    Raises NotInvertibleError when ``gcd(a, c) > 1``.  Modulo 1 everything
    is invertible and the inverse is 0.
    """
    _check_positive(c)
    if math.gcd(a, c) != 1:
        raise NotInvertibleError(f"{a} is not invertible modulo {c}")
    if c == 1:
        return 0
    return pow(a, -1, c)


def crt_combine(pairs: Iterable[tuple[int, int]]) -> ResidueClass:
    """Combine congruences ``x = r_i (mod m_i)`` with pairwise coprime moduli."""
    residue, modulus = 0, 1
    for r, m in pairs:
        _check_positive(m)
        if math.gcd(modulus, m) != 1:
            raise DomainError(f"moduli {modulus} and {m} are not coprime")
        # x = residue + modulus * k, solve modulus * k = r - residue (mod m)
        k = (r - residue) * mod_inverse(modulus, m) % m
        residue += modulus * k
        modulus *= m
        residue %= modulus
    return ResidueClass(residue, modulus)


def d_prime(d: int) -> int:
    """Smallest ``e`` with ``d | e**2``, i.e. the product of ``p**ceil(v/2)``."""
    return math.prod(p ** ((e + 1) // 2) for p, e in factorize(d))


def primes_in(lo: int, hi: int) -> list[int]:
    """All primes in ``[lo, hi]`` by a segmented sieve (``hi <= 10**9``)."""
    if lo > hi:
        return []
    if hi > 10**9:
        raise DomainError("primes_in is limited to hi <= 10**9")
    lo = max(lo, 2)
    if lo > hi:
        return []
    seg = np.ones(hi - lo + 1, dtype=bool)
    for p in small_primes(math.isqrt(hi)):
        p = int(p)
        start = max(p * p, (lo + p - 1) // p * p)
        seg[start - lo::p] = False
    return [int(x) + lo for x in np.flatnonzero(seg)]


def units(c: int) -> np.ndarray:
    """Residues in ``[0, c)`` coprime to ``c`` (``[0]`` for ``c == 1``)."""
    _check_positive(c)
    r = np.arange(c, dtype=np.int64)
    return r[np.gcd(r, c) == 1]


def inverse_table(c: int) -> np.ndarray:
    """Array ``inv`` of length c with ``inv[x] = x^{-1} mod c`` on units, -1 elsewhere."""
    inv = np.full(c, -1, dtype=np.int64)
    for x in units(c):
        inv[x] = mod_inverse(int(x), c)
    return inv


def multiplicative_order(a: int, c: int) -> int:
    if math.gcd(a, c) != 1:
        raise NotInvertibleError(f"{a} is not a unit modulo {c}")
    order = euler_phi(c)
    for p, _ in factorize(order):
        while order % p == 0 and pow(a, order // p, c) == 1 % c:
            order //= p
    return order
