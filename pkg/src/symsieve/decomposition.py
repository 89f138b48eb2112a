"""Exact checks of the divisor/Fourier decomposition of

    D(m, n) = sum_c S(m^2, n^2; c) e_c(2mn) / c * H(4 pi m n / c)

with compactly supported test weights ``H``.  Compact support turns every
c-sum into a finite one, so the three forms can be compared term for term:

* :func:`d_raw` - the definition above;
* :func:`d_decomposed` - split by ``d | (m^2, n^2)`` and ``g | mn/d``, with
  ``mu(g)/g`` weights and ``S((mn/dg)^2, 1; c) e_c(2mn/dg)``, ``(c, mn/d) = 1``;
* :func:`d_fourier_form` - the last sum expanded over characters mod ``c``
  as ``sum_chi Fhat(chi) chi(mn/dg)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .arith import DomainError, divisors, moebius
from .characters import character_group
from .expsums import TOL, e, kloosterman
from .fhat import fhat_direct_all

FOURIER_TOL = 1e-7


@dataclass(frozen=True)
class TestWeight:
    """A real weight vanishing outside ``[lo, hi]`` and bounded by ``max``."""
    __test__ = False  # not a pytest class

    lo: float
    hi: float
    evaluator: Callable[[float], float]
    description: str
    max: float = 1.0

    def __post_init__(self):
        if not (0 < self.lo < self.hi < math.inf):
            raise DomainError(f"support [{self.lo}, {self.hi}] must be a bounded interval in (0, inf)")

    @property
    def support(self) -> tuple[float, float]:
        return self.lo, self.hi

    def __call__(self, x: float) -> float:
        if not (self.lo <= x <= self.hi):
            return 0.0
        return self.evaluator(x)

    def c_window(self, w: int) -> range:
        """Integers ``c`` with ``lo <= 4 pi w / c <= hi``."""
        x = 4 * math.pi * w
        return range(max(1, math.ceil(x / self.hi)), math.floor(x / self.lo) + 1)


def tent(lo: float, hi: float) -> TestWeight:
    """Piecewise-linear tent of height 1 peaking at the midpoint."""
    mid, half = (lo + hi) / 2, (hi - lo) / 2
    return TestWeight(lo, hi, lambda x: max(0.0, 1 - abs(x - mid) / half), f"tent[{lo:g},{hi:g}]")


def bump(lo: float, hi: float) -> TestWeight:
    """The C^2 bump ``(1 - s^2)^3`` with ``s`` mapping ``[lo, hi]`` onto ``[-1, 1]``."""
    mid, half = (lo + hi) / 2, (hi - lo) / 2

    def f(x):
        s = (x - mid) / half
        return max(0.0, 1 - s * s) ** 3
    return TestWeight(lo, hi, f, f"bump[{lo:g},{hi:g}]")


def _battery() -> tuple[TestWeight, ...]:
    return (tent(4, 8), tent(3, 12), bump(5, 10), bump(6, 48), tent(8, 64))


WEIGHT_BATTERY = _battery()


def _weight_at(H: TestWeight, w: int, c: int) -> float:
    x = 4 * math.pi * w / c
    # the c-window must never hand out a c outside the support
    assert H.lo - 1e-9 <= x <= H.hi + 1e-9, (w, c, x, H.support)
    return H(x)


def _check_args(m: int, n: int, H) -> None:
    if m < 1 or n < 1:
        raise DomainError(f"m, n must be positive, got {m}, {n}")
    if not isinstance(H, TestWeight):
        raise DomainError("H must be a TestWeight with bounded support")


def d_raw(m: int, n: int, H: TestWeight, sign: int = 1) -> complex:
    """``sum_c S(m^2, n^2; c) e_c(sign 2mn) / c * H(4 pi mn / c)``."""
    _check_args(m, n, H)
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    w = m * n
    total = 0j
    for c in H.c_window(w):
        h = _weight_at(H, w, c)
        if h:
            total += kloosterman(m * m, n * n, c) * e(sign * 2 * w, c) / c * h
    return total


def _outer_terms(m: int, n: int):
    """``(d, g, mu(g)/g, mn/d)`` over ``d | (m^2, n^2)``, ``g | mn/d``, ``mu(g) != 0``."""
    for d in divisors(math.gcd(m * m, n * n)):
        wd = m * n // d
        for g in divisors(wd):
            mu = moebius(g)
            if mu:
                yield d, g, mu / g, wd


def d_decomposed(m: int, n: int, H: TestWeight) -> complex:
    _check_args(m, n, H)
    total = 0j
    for d, g, coeff, wd in _outer_terms(m, n):
        w = wd // g
        inner = 0j
        for c in H.c_window(w):
            if math.gcd(c, wd) != 1:
                continue
            h = _weight_at(H, w, c)
            if h:
                inner += kloosterman(w * w, 1, c) * e(2 * w, c) / c * h
        total += coeff * inner
    return total


def _character_expansion(w: int, c: int) -> complex:
    """``sum_{chi mod c} Fhat(chi) chi(w)``."""
    return complex(fhat_direct_all(c) @ character_group(c).value_matrix(w)[:, 0])


def d_fourier_form(m: int, n: int, H: TestWeight) -> complex:
    """:func:`d_decomposed` with the Kloosterman factor expanded over characters.

    ``chi`` is evaluated at ``w = mn/(dg)``; the coprimality ``(c, mn/d) = 1``
    is kept explicitly since it is stronger than ``(c, w) = 1``.
    """
    _check_args(m, n, H)
    total = 0j
    for d, g, coeff, wd in _outer_terms(m, n):
        w = wd // g
        inner = 0j
        for c in H.c_window(w):
            if math.gcd(c, wd) != 1:
                continue
            h = _weight_at(H, w, c)
            if h:
                inner += _character_expansion(w, c) / c * h
        total += coeff * inner
    return total


class DecompositionRow(NamedTuple):
    m: int
    n: int
    weight: str
    abs_raw: float
    max_deviation: float
    passed: bool


def decomposition_row(m: int, n: int, H: TestWeight, tol: float = FOURIER_TOL) -> DecompositionRow:
    raw = d_raw(m, n, H)
    dec = d_decomposed(m, n, H)
    four = d_fourier_form(m, n, H)
    dev = max(abs(raw - dec), abs(raw - four), abs(dec - four))
    passed = abs(raw - dec) < TOL and dev < tol
    return DecompositionRow(m, n, H.description, abs(raw), dev, passed)


def decomposition_table(mmax: int = 12, weights=WEIGHT_BATTERY,
                        tol: float = FOURIER_TOL) -> list[DecompositionRow]:
    return [decomposition_row(m, n, H, tol)
            for m in range(1, mmax + 1) for n in range(1, mmax + 1) for H in weights]
