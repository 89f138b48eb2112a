"""The Riemann zeta function near the 1-line, and the Eisenstein weight.

:func:`zeta` uses Euler-Maclaurin summation with ``N`` head terms and as
many Bernoulli correction terms as needed.  With ``sigma = Re s`` the
remainder after ``M`` corrections satisfies

    |R_M| <= |s + 2M + 1| / (sigma + 2M + 1) * |T_{M+1}|

where ``T_{M+1}`` is the first omitted correction; summation stops once
this is below the requested tolerance.  :func:`zeta_borwein` is an
independent implementation through the alternating series for ``eta``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from . import kernels
from .arith import DomainError

ZETA_TOL = 1e-12
_MAX_CORRECTIONS = 60


@lru_cache(maxsize=1)
def _bernoulli_even() -> np.ndarray:
    """``B_{2k} / (2k)!`` for ``k = 0 .. _MAX_CORRECTIONS + 1``."""
    B = bernoulli(2 * _MAX_CORRECTIONS + 2)
    return np.array([B[2 * k] / math.factorial(2 * k) for k in range(_MAX_CORRECTIONS + 2)])


def _head_length(s: np.ndarray) -> int:
    return int(10 + np.max(np.abs(s.imag), initial=0.0) / math.pi)


def zeta(s, tol: float = ZETA_TOL) -> np.ndarray:
    """``zeta(s)`` for ``Re s > 0``, ``s != 1``, with remainder bounded by ``tol``."""
    s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    if np.any(s.real <= 0) or np.any(np.abs(s - 1) < 1e-12):
        raise DomainError("zeta is implemented for Re s > 0 away from s = 1")
    N = _head_length(s)
    head = kernels.zeta_head(np.ascontiguousarray(s), N)
    Ns = np.exp(-s * math.log(N))                 # N^{-s}
    total = head + N * Ns / (s - 1) + 0.5 * Ns
    coef = _bernoulli_even()
    # T_k = B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    rising = s.copy()                              # s(s+1)...(s+2k-2) at k = 1
    power = Ns / N                                 # N^{-s-1}
    for k in range(1, _MAX_CORRECTIONS + 1):
        total = total + coef[k] * rising * power
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (N * N)
        nxt = np.abs(coef[k + 1] * rising * power)
        bound = np.abs(s + 2 * k + 1) / (s.real + 2 * k + 1) * nxt
        if np.all(bound < tol):
            return total
    raise ArithmeticError("Euler-Maclaurin remainder did not reach the tolerance")


def zeta_borwein(s, n: int = 64) -> np.ndarray:
    """``zeta(s)`` from Borwein's accelerated alternating series for ``eta(s)``.

    Accurate to about ``3 (3 + sqrt 8)^{-n}`` times a factor growing like
    ``exp(pi |Im s| / 2)``, so suited to moderate heights only.
    """
    s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    # d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), exact
    d = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(n * math.factorial(n + i - 1) * 4**i,
                        math.factorial(n - i) * math.factorial(2 * i))
        d.append(acc)
    w = np.array([float((-1) ** k * (d[n] - d[k]) / d[n]) for k in range(n)])
    terms = w[None, :] * np.exp(-np.outer(s, np.log(np.arange(1, n + 1.0))))
    eta = terms.sum(axis=1)
    return eta / (1 - 2.0 ** (1 - s))


def eis_weight(t) -> np.ndarray | float:
    """``w_t = |zeta(1 + 2it)|^2``; raises DomainError for ``|t| < 0.5``."""
    arr = np.asarray(t, dtype=np.float64)
    if np.any(np.abs(arr) < 0.5):
        raise DomainError("eis_weight needs |t| >= 0.5 to stay off the pole")
    vals = np.abs(zeta(1 + 2j * arr.ravel())) ** 2
    if arr.ndim == 0:
        return float(vals[0])
    return vals.reshape(arr.shape)
