"""Complete exponential sums evaluated exactly by direct summation.

Phases come from per-modulus tables ``e_c(k) = exp(2 pi i k / c)`` indexed by
an exact integer residue, so each term carries only the rounding of one
table entry.  Identities are asserted at ``TOL = 1e-8`` absolute.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import kernels
from .arith import DomainError, divisors, factorize, inverse_table, moebius, num_divisors, units
from .characters import DirichletCharacter

TOL = 1e-8


@lru_cache(maxsize=256)
def _phase_tables(c: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(c, dtype=np.float64)
    theta = 2 * np.pi * k / c
    cos, sin = np.cos(theta), np.sin(theta)
    for tbl in (cos, sin):
        tbl.setflags(write=False)
    return cos, sin


def phase_table(c: int) -> np.ndarray:
    """``e_c(k)`` for ``k = 0..c-1``."""
    cos, sin = _phase_tables(c)
    return cos + 1j * sin


def e(k: int, c: int) -> complex:
    """``e_c(k) = exp(2 pi i k / c)`` with the residue reduced exactly first."""
    cos, sin = _phase_tables(c)
    r = k % c
    return complex(cos[r], sin[r])


@lru_cache(maxsize=256)
def _inverse_table(c: int) -> np.ndarray:
    inv = inverse_table(c)
    inv.setflags(write=False)
    return inv


def kloosterman(a: int, b: int, c: int) -> complex:
    """``S(a, b; c) = sum_{x unit mod c} e_c(a x + b xbar)``; ``S(a, b; 1) = 1``."""
    if c < 1:
        raise DomainError(f"modulus must be positive, got {c}")
    inv = _inverse_table(c)
    xs = np.flatnonzero(inv >= 0)
    idx = ((a % c) * xs + (b % c) * inv[xs]) % c
    cos, sin = _phase_tables(c)
    return complex(cos[idx].sum(), sin[idx].sum())


def kloosterman_many(avals, c: int) -> np.ndarray:
    """``S(a, 1; c)`` for each ``a`` in ``avals`` as a real array."""
    avals = np.ascontiguousarray(np.asarray(avals, dtype=np.int64) % c)
    cos, _ = _phase_tables(c)
    return kernels.kloosterman_row(avals, c, _inverse_table(c), cos)


def kloosterman_p2_closed(m: int, n: int, p: int) -> complex:
    """``S(m^2, n^2; p^2) = p (e_{p^2}(2mn) + e_{p^2}(-2mn))`` for odd ``p`` not dividing ``mn``.

    The phases live modulo ``p^2``: with ``e_p`` in their place the two
    sides already disagree at ``S(1, 1; 9) = 6 cos(4 pi / 9)``.
    """
    if p == 2 or factorize(p).factors != ((p, 1),):
        raise DomainError(f"{p} is not an odd prime")
    if (m * n) % p == 0:
        raise DomainError(f"{p} divides m*n = {m * n}")
    q = p * p
    return p * (e(2 * m * n, q) + e(-2 * m * n, q))


def kloosterman_p2_literal(m: int, n: int, p: int) -> float:
    """``2p cos(4 pi m n / p)``, the prime-square form with phases modulo ``p``.

    Kept to document that this variant does not match the direct sum.
    """
    return 2 * p * math.cos(4 * math.pi * m * n / p)


class IdentityCheck(NamedTuple):
    lhs: complex
    rhs: complex
    agree: bool

    @property
    def deviation(self) -> float:
        return abs(self.lhs - self.rhs)


def selberg_identity_check(m: int, n: int, c: int, tol: float = TOL) -> IdentityCheck:
    """Both sides of ``S(m^2, n^2; c) = sum_{d | (m^2, n^2, c)} d S(m^2 n^2 / d^2, 1; c/d)``."""
    m2, n2 = m * m, n * n
    lhs = kloosterman(m2, n2, c)
    g = math.gcd(math.gcd(m2, n2), c)
    rhs = sum((d * kloosterman(m2 * n2 // (d * d), 1, c // d) for d in divisors(g)), 0j)
    return IdentityCheck(lhs, rhs, abs(lhs - rhs) < tol)


def prime_power_vanishing_check(p: int, k: int, cexp: int, tol: float = TOL) -> bool:
    """True iff ``|S(p^k, 1; p^cexp)| < tol``; expected for ``k >= 1`` and ``cexp >= 2``."""
    return abs(kloosterman(p**k, 1, p**cexp)) < tol


def ramanujan_sum(q: int, n: int) -> int:
    """``c_q(n) = sum_{d | (q, n)} d mu(q/d)``."""
    if q < 1:
        raise DomainError(f"modulus must be positive, got {q}")
    g = math.gcd(q, n)
    return sum(d * moebius(q // d) for d in divisors(g))


def ramanujan_sum_direct(q: int, n: int) -> complex:
    """``sum_{(t, q) = 1} e_q(t n)`` summed directly."""
    cos, sin = _phase_tables(q)
    idx = units(q) * (n % q) % q
    return complex(cos[idx].sum(), sin[idx].sum())


def gauss_sum(chi: DirichletCharacter) -> complex:
    """``tau(chi) = sum_{t mod c} chi(t) e_c(t)``."""
    return complex(np.sum(chi.values() * phase_table(chi.modulus)))


def jacobi_sum(chi: DirichletCharacter, psi: DirichletCharacter) -> complex:
    """``J(chi, psi) = sum_{u mod c} chi(u) psi(1 - u)``.

    The shifted sum ``sum_u conj(chi)(u) chi^2(u + 1)`` that arises from the
    Fourier coefficient equals ``chi(-1) J(conj(chi), chi^2)`` (substitute
    ``u -> -u``); see :func:`shifted_jacobi_sum`.
    """
    if chi.modulus != psi.modulus:
        raise DomainError(f"moduli differ: {chi.modulus} vs {psi.modulus}")
    c = chi.modulus
    u = np.arange(c)
    return complex(np.sum(chi.values() * psi.values()[(1 - u) % c]))


def shifted_jacobi_sum(chi: DirichletCharacter) -> complex:
    """``sum_{u mod c} conj(chi)(u) chi^2(u + 1)`` summed directly."""
    c = chi.modulus
    v = chi.values()
    v2 = (chi**2).values()
    u = np.arange(c)
    return complex(np.sum(np.conj(v) * v2[(u + 1) % c]))


def weil_bound(a: int, b: int, c: int) -> float:
    """``d(c) sqrt(gcd(a, b, c)) sqrt(c)``."""
    return num_divisors(c) * math.sqrt(math.gcd(math.gcd(a, b), c)) * math.sqrt(c)
