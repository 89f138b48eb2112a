"""Verification suites shared by the command line and the acceptance tests.

Every suite returns a list of row dicts.  Each row carries ``max_deviation``
and ``passed``; the remaining keys identify the case.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from .arith import euler_phi, primes_in
from .characters import DirichletCharacter, iter_characters
from .decomposition import WEIGHT_BATTERY, decomposition_row
from .expsums import (TOL, kloosterman, kloosterman_p2_closed, kloosterman_p2_literal,
                      selberg_identity_check)
from .fhat import (closed_form_deviations, fhat_all, fhat_direct_all, fhat_double_sum_all,
                   fhat_crt, fourier_inversion_deviation, parseval_deviation,
                   twisted_multiplicativity_deviation)
from .bilinear import reparam_mismatches

INVERSION_TOL = 1e-7
PARSEVAL_TOL = 1e-6


def parallel_map(fn: Callable, items, threads: int = 1) -> list:
    """Ordered map; the result order never depends on ``threads``."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def prime_powers(limit: int, pmax: int | None = None, kmax: int | None = None) -> list[tuple[int, int]]:
    """``(p, k)`` with ``p^k <= limit`` (and the optional caps), sorted by ``p^k``."""
    out = []
    for p in primes_in(2, limit if pmax is None else min(pmax, limit)):
        k, q = 1, p
        while q <= limit and (kmax is None or k <= kmax):
            out.append((p, k))
            k, q = k + 1, q * p
    return sorted(out, key=lambda pk: pk[0] ** pk[1])


# -- exponential sums --------------------------------------------------------

def selberg(mmax: int = 12, cmax: int = 60, tol: float = TOL, threads: int = 1) -> list[dict]:
    def case(c):
        rows = []
        for m in range(1, mmax + 1):
            for n in range(1, mmax + 1):
                chk = selberg_identity_check(m, n, c, tol)
                rows.append({"m": m, "n": n, "c": c, "max_deviation": chk.deviation,
                             "passed": chk.agree})
        return rows
    return [r for rows in parallel_map(case, range(1, cmax + 1), threads) for r in rows]


def vanishing(pmax: int = 13, kmax: int = 3, emin: int = 2, emax: int = 4,
              tol: float = TOL, threads: int = 1) -> list[dict]:
    rows = []
    for p in primes_in(2, pmax):
        for k in range(1, kmax + 1):
            for e in range(emin, emax + 1):
                dev = abs(kloosterman(p**k, 1, p**e))
                rows.append({"p": p, "k": k, "e": e, "max_deviation": dev, "passed": dev < tol})
    return rows


def p2_closed_form(pmax: int = 31, mmax: int = 10, tol: float = TOL,
                   literal: bool = False) -> list[dict]:
    """Direct ``S(m^2, n^2; p^2)`` against the prime-square closed form.

    ``literal=True`` compares with ``2p cos(4 pi mn / p)`` instead of the
    phases modulo ``p^2``.
    """
    closed = kloosterman_p2_literal if literal else kloosterman_p2_closed
    rows = []
    for p in primes_in(3, pmax):
        for m in range(1, mmax + 1):
            for n in range(1, mmax + 1):
                if (m * n) % p == 0:
                    continue
                dev = abs(kloosterman(m * m, n * n, p * p) - closed(m, n, p))
                rows.append({"p": p, "m": m, "n": n, "max_deviation": dev, "passed": dev < tol})
    return rows


# -- the Fourier coefficient -------------------------------------------------------

def fhat_defs(cmax: int = 100, cmin: int = 1, tol: float = TOL, threads: int = 1) -> list[dict]:
    """Direct sum vs double sum vs FFT vs CRT assembly, per modulus."""
    def case(c):
        direct = fhat_direct_all(c)
        double = fhat_double_sum_all(c)
        fft = fhat_all(c)
        crt = np.array([fhat_crt(chi) for chi in iter_characters(c)])
        dev = float(max(np.abs(direct - double).max(), np.abs(direct - fft).max(),
                        np.abs(direct - crt).max()))
        return {"c": c, "characters": direct.size, "max_deviation": dev, "passed": dev < tol}
    return parallel_map(case, range(cmin, cmax + 1), threads)


def fhat_closed_forms(limit: int = 3000, pmax: int | None = None, kmax: int | None = None,
                      tol: float = TOL, kinds: tuple[str, ...] | None = None,
                      direct: bool = False, threads: int = 1) -> list[dict]:
    """Values against the closed forms at prime-power moduli ``<= limit``.

    One row per (modulus, rule).  ``kinds`` restricts to local classes
    (``trivial``, ``primitive``, ``semi-primitive``).  Values come from the
    FFT table, or from the defining sum when ``direct`` is set.
    """
    def case(pk):
        p, k = pk
        q = p**k
        values = fhat_direct_all(q) if direct else None
        rows = []
        for cf, count, dev in closed_form_deviations(p, k, values):
            if kinds is not None and cf.rule.split(",")[0] not in kinds:
                continue
            rows.append({"p": p, "k": k, "modulus": q, "rule": cf.rule, "kind": cf.kind,
                         "closed_form_abs_or_bound": cf.magnitude, "characters": count,
                         "max_deviation": dev, "passed": dev < tol})
        return rows
    pks = prime_powers(limit, pmax, kmax)
    return [r for rows in parallel_map(case, pks, threads) for r in rows]


def multiplicativity_pairs(pairs: int = 1000, cmax: int = 10_000, seed: int = 0):
    """Deterministic random ``(chi1, chi2)`` with coprime moduli and ``c1 c2 <= cmax``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < pairs:
        # log-uniform sizes so both small and large moduli appear
        c1 = int(np.exp(rng.uniform(0, math.log(cmax))))
        c2 = int(np.exp(rng.uniform(0, math.log(cmax // c1))))
        c1, c2 = max(c1, 1), max(c2, 1)
        if c1 * c2 > cmax or math.gcd(c1, c2) != 1:
            continue
        i1 = int(rng.integers(euler_phi(c1)))
        i2 = int(rng.integers(euler_phi(c2)))
        out.append((c1, i1, c2, i2))
    return out


def multiplicativity(pairs: int = 1000, cmax: int = 10_000, seed: int = 0, tol: float = TOL,
                     threads: int = 1) -> list[dict]:
    def case(item):
        c1, i1, c2, i2 = item
        chi1 = DirichletCharacter.from_index(c1, i1)
        chi2 = DirichletCharacter.from_index(c2, i2)
        dev = twisted_multiplicativity_deviation(chi1, chi2)
        return {"c1": c1, "index1": i1, "c2": c2, "index2": i2, "max_deviation": dev,
                "passed": dev < tol}
    return parallel_map(case, multiplicativity_pairs(pairs, cmax, seed), threads)


def parseval(cmax: int = 300, threads: int = 1) -> list[dict]:
    def case(c):
        inv = fourier_inversion_deviation(c)
        par = parseval_deviation(c)
        return {"c": c, "inversion_deviation": inv, "parseval_deviation": par,
                "max_deviation": max(inv, par),
                "passed": inv < INVERSION_TOL and par < PARSEVAL_TOL}
    return parallel_map(case, range(1, cmax + 1), threads)


# -- decomposition and combinatorics ----------------------------------------------

def decomposition(mmax: int = 12, weights=WEIGHT_BATTERY, threads: int = 1) -> list[dict]:
    cases = [(m, n, H) for m in range(1, mmax + 1) for n in range(1, mmax + 1) for H in weights]

    def case(item):
        row = decomposition_row(*item)
        return {"m": row.m, "n": row.n, "weight": row.weight, "abs_d_raw": row.abs_raw,
                "max_deviation": row.max_deviation, "passed": row.passed}
    return parallel_map(case, cases, threads)


COROLLARY23_GRID = tuple(
    (d, g, N)
    for i, (d, g) in enumerate((d, g) for d in (1, 4, 8, 12, 36, 72) for g in (1, 3, 6, 10, 35))
    for N in ((50, 100, 150, 200, 300)[i % 5],)
)


def corollary23(grid=COROLLARY23_GRID, threads: int = 1) -> list[dict]:
    def case(item):
        d, g, N = item
        bad = reparam_mismatches(d, g, N)
        return {"d": d, "g": g, "N": N, "mismatched_pairs": bad, "max_deviation": float(bad),
                "passed": bad == 0}
    return parallel_map(case, grid, threads)


SUITES = {
    "selberg": selberg,
    "vanishing": vanishing,
    "fhat-defs": fhat_defs,
    "fhat-closed": fhat_closed_forms,
    "multiplicativity": multiplicativity,
    "decomposition": decomposition,
    "parseval": parseval,
    "corollary23": corollary23,
}

