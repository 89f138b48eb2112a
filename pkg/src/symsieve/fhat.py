"""The multiplicative Fourier transform of ``w -> S(w^2, 1; c) e_c(2w)``.

For a character ``chi`` modulo ``c``::

    Fhat(chi) = 1/phi(c) * sum_{u mod c} conj(chi)(u) S(u^2, 1; c) e_c(2u)
              = 1/phi(c) * sum_{u, t mod c} conj(chi)(u t) e_c(t (u + 1)^2)

Three independent routes are provided:

* :func:`fhat_direct` - the first line, one character at a time;
* :func:`fhat_double_sum` - the second line (no Kloosterman sums involved);
* :func:`fhat_all` / :func:`fhat_crt` - an FFT over the unit group laid out
  by discrete logs, and assembly from prime-power pieces by twisted
  multiplicativity.

:func:`fhat_closed` gives the exact value or bound at prime-power moduli
from the trivial / primitive / semi-primitive classification.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, NamedTuple

import numpy as np

from . import kernels
from .arith import DomainError, euler_phi, factorize, is_squarefree, radical, units
from .characters import (CharacterClass, DirichletCharacter, character_group, classify,
                         iter_characters, local_group)
from .expsums import TOL, _phase_tables, kloosterman_many, phase_table


# -- tables ------------------------------------------------------------------

@lru_cache(maxsize=512)
def f_table(c: int) -> np.ndarray:
    """``F(w) = S(w^2, 1; c) e_c(2w)`` on units, 0 elsewhere (length ``c``)."""
    us = units(c)
    squares = us * us % c
    distinct, back = np.unique(squares, return_inverse=True)
    svals = kloosterman_many(distinct, c)[back]
    out = np.zeros(c, dtype=np.complex128)
    out[us] = svals * phase_table(c)[2 * us % c]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=256)
def _grouped_double_sum(c: int) -> np.ndarray:
    cos, sin = _phase_tables(c)
    g = kernels.product_grouped_sum(c, cos, sin)
    g.setflags(write=False)
    return g


@lru_cache(maxsize=512)
def fhat_all(c: int) -> np.ndarray:
    """``Fhat`` of every character modulo ``c``, indexed by character index."""
    grp = character_group(c)
    us = units(c)
    F = f_table(c)[us]
    phi = len(us)
    if not grp.shape:
        out = np.array([F.sum() / phi], dtype=np.complex128)
    else:
        arr = np.zeros(grp.shape, dtype=np.complex128)
        arr[tuple(grp.log_vectors(us).T)] = F
        out = (np.fft.fftn(arr) / phi).ravel()
    out.setflags(write=False)
    return out


# -- the three routes -----------------------------------------------------------

def fhat_direct(chi: DirichletCharacter) -> complex:
    """``1/phi(c) sum_u conj(chi)(u) S(u^2,1;c) e_c(2u)``; equals 1 for ``c = 1``."""
    c = chi.modulus
    return complex(np.vdot(chi.values(), f_table(c)) / euler_phi(c))


@lru_cache(maxsize=1024)
def fhat_direct_all(c: int) -> np.ndarray:
    """:func:`fhat_direct` for every character modulo ``c`` at once (index order)."""
    us = units(c)
    vals = character_group(c).value_matrix(us)
    out = np.conj(vals) @ f_table(c)[us] / len(us)
    out.setflags(write=False)
    return out


def fhat_double_sum(chi: DirichletCharacter) -> complex:
    """``1/phi(c) sum_{u,t} conj(chi)(u t) e_c(t (u+1)^2)`` in ``O(c^2)``."""
    c = chi.modulus
    return complex(np.vdot(chi.values(), _grouped_double_sum(c)) / euler_phi(c))


def fhat_double_sum_all(c: int) -> np.ndarray:
    """:func:`fhat_double_sum` for every character modulo ``c`` (index order)."""
    us = units(c)
    vals = character_group(c).value_matrix(us)
    return np.conj(vals) @ _grouped_double_sum(c)[us] / len(us)


def fhat_fft(chi: DirichletCharacter) -> complex:
    return complex(fhat_all(chi.modulus)[chi.index])


def fhat_crt(chi: DirichletCharacter) -> complex:
    """Assemble ``Fhat(chi)`` from its prime-power components.

    ``Fhat(chi_1 ... chi_r) = prod_i conj(chi_i)(c / q_i) Fhat(chi_i)`` where
    ``chi_i`` is the component modulo ``q_i = p_i^k_i``.
    """
    c = chi.modulus
    value = 1 + 0j
    for loc in chi.local_characters():
        q = loc.modulus
        value *= np.conj(loc(c // q)) * fhat_fft(loc)
    return complex(value)


def fhat(chi: DirichletCharacter) -> complex:
    """Fast path: CRT assembly over FFT tables at each prime power."""
    return fhat_crt(chi)


def twisted_multiplicativity_check(chi1: DirichletCharacter, chi2: DirichletCharacter,
                                   tol: float = TOL) -> bool:
    """``Fhat(chi1 chi2) == conj(chi1)(c2) conj(chi2)(c1) Fhat(chi1) Fhat(chi2)`` within ``tol``."""
    return twisted_multiplicativity_deviation(chi1, chi2) < tol


def twisted_multiplicativity_deviation(chi1: DirichletCharacter, chi2: DirichletCharacter) -> float:
    c1, c2 = chi1.modulus, chi2.modulus
    if math.gcd(c1, c2) != 1:
        raise DomainError(f"moduli {c1} and {c2} are not coprime")
    chi = DirichletCharacter.from_locals([*chi1.components, *chi2.components])
    lhs = fhat_direct(chi)
    rhs = np.conj(chi1(c2)) * np.conj(chi2(c1)) * fhat_direct(chi1) * fhat_direct(chi2)
    return abs(lhs - rhs)


# -- closed forms ---------------------------------------------------------------

class ClosedForm(NamedTuple):
    """``kind`` is ``"value"`` (exact complex value), ``"abs"`` (exact modulus)
    or ``"bound"`` (upper bound on the modulus)."""
    kind: Literal["value", "abs", "bound"]
    value: complex
    rule: str

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    def holds(self, z: complex, tol: float = TOL) -> bool:
        if self.kind == "value":
            return abs(z - self.value) < tol
        if self.kind == "abs":
            return abs(abs(z) - abs(self.value)) < tol
        return abs(z) <= abs(self.value) + tol

    def deviation(self, z: complex) -> float:
        if self.kind == "value":
            return abs(z - self.value)
        if self.kind == "abs":
            return abs(abs(z) - abs(self.value))
        return max(0.0, abs(z) - abs(self.value))


def _is_prime_power(c: int) -> bool:
    return len(factorize(c)) == 1


def closed_form_rule(p: int, k: int, j: int, real: bool) -> ClosedForm:
    """Closed form at modulus ``p^k`` for a character of conductor ``p^j``.

    ``real`` says whether ``chi^2`` is trivial.
    """
    if j == 0:
        if k == 1:
            return ClosedForm("value", complex(1 / (p - 1)), "trivial, k=1")
        if k % 2 == 0:
            return ClosedForm("value", complex(p ** (k // 2)), "trivial, k even")
        return ClosedForm("value", 0j, "trivial, k>=3 odd")
    if j == k:
        if p == 2:
            return ClosedForm("value", 0j, "primitive, p=2")
        if k == 1 and real:
            return ClosedForm("abs", complex(math.sqrt(p) / (p - 1)), "primitive, Legendre")
        return ClosedForm("abs", complex(p / (p - 1)), "primitive, p odd")
    assert 1 <= j < k, (j, k)
    if (k - j) % 2:
        return ClosedForm("value", 0j, "semi-primitive, j!=k mod 2")
    if real:
        return ClosedForm("bound", complex(p ** (k / 2)), "semi-primitive, chi^2=1")
    if p != 2:
        return ClosedForm("value", 0j, "semi-primitive, chi^2!=1, p odd")
    if k > j + 2:
        return ClosedForm("value", 0j, "semi-primitive, chi^2!=1, p=2, k>j+2")
    return ClosedForm("bound", complex(2**2.5), "semi-primitive, chi^2!=1, p=2, k=j+2")


def fhat_closed(chi: DirichletCharacter) -> ClosedForm:
    """Exact value or bound for ``Fhat(chi)`` at a prime-power modulus ``p^k``."""
    c = chi.modulus
    if c == 1:
        return ClosedForm("value", 1 + 0j, "modulus 1")
    if not _is_prime_power(c):
        raise DomainError(f"fhat_closed needs a prime-power modulus, got {c}; use fhat_closed_composite")
    (lc,) = chi.components
    return closed_form_rule(lc.p, lc.k, lc.conductor_exponent(), (chi**2).is_trivial())


def closed_form_table(p: int, k: int) -> list[tuple[ClosedForm, np.ndarray]]:
    """``(closed form, character indices)`` for every rule that occurs mod ``p^k``."""
    grp = local_group(p, k)
    cond = grp.conductor_exponents()
    real = grp.real_mask()
    out = []
    for j in range(k + 1):
        for r in (False, True):
            idx = np.flatnonzero((cond == j) & (real == r))
            if idx.size:
                out.append((closed_form_rule(p, k, j, r), idx))
    return out


def closed_form_deviations(p: int, k: int, values: np.ndarray | None = None) -> list[tuple[ClosedForm, int, float]]:
    """``(rule, count, max deviation)`` of ``values`` (default: the FFT table) mod ``p^k``."""
    if values is None:
        values = fhat_all(p**k)
    out = []
    for cf, idx in closed_form_table(p, k):
        z = values[idx]
        if cf.kind == "value":
            dev = np.abs(z - cf.value)
        elif cf.kind == "abs":
            dev = np.abs(np.abs(z) - abs(cf.value))
        else:
            dev = np.maximum(0.0, np.abs(z) - abs(cf.value))
        out.append((cf, idx.size, float(dev.max())))
    return out


def fhat_closed_composite(chi: DirichletCharacter) -> ClosedForm:
    """Closed form for any modulus from ``|Fhat|`` being multiplicative."""
    if chi.modulus == 1:
        return fhat_closed(chi)
    parts = [fhat_closed(loc) for loc in chi.local_characters()]
    if len(parts) == 1:
        return parts[0]
    mag = math.prod(part.magnitude for part in parts)
    if any(part.kind != "bound" and part.magnitude == 0 for part in parts):
        return ClosedForm("value", 0j, "product with a vanishing factor")
    kind = "bound" if any(part.kind == "bound" for part in parts) else "abs"
    return ClosedForm(kind, complex(mag), "product of prime-power factors")


@dataclass(frozen=True)
class FhatReport:
    modulus: int
    char_index: int
    cls: CharacterClass
    direct_value: complex
    closed_form: ClosedForm
    agree: bool

    def row(self) -> dict:
        return {
            "c": self.modulus,
            "char_index": self.char_index,
            "class": self.cls.kind,
            "conductor": self.cls.conductor,
            "re": self.direct_value.real,
            "im": self.direct_value.imag,
            "abs": abs(self.direct_value),
            "closed_form_abs_or_bound": self.closed_form.magnitude,
            "agree": self.agree,
        }


def fhat_report(chi: DirichletCharacter, tol: float = TOL) -> FhatReport:
    value = fhat_direct(chi)
    closed = fhat_closed_composite(chi)
    return FhatReport(chi.modulus, chi.index, classify(chi), value, closed, closed.holds(value, tol))


def scan_modulus(c: int, tol: float = TOL) -> list[FhatReport]:
    """Reports for every character modulo ``c`` in index order.

    Uses the FFT table for the values; each is checked against the closed form.
    """
    values = fhat_all(c)
    out = []
    for chi in iter_characters(c):
        z = complex(values[chi.index])
        closed = fhat_closed_composite(chi)
        out.append(FhatReport(c, chi.index, classify(chi), z, closed, closed.holds(z, tol)))
    return out


# -- Fourier inversion and Parseval ---------------------------------------------

def fourier_inversion_deviation(c: int) -> float:
    """``max_w |sum_chi Fhat(chi) chi(w) - S(w^2,1;c) e_c(2w)|`` over units ``w``."""
    us = units(c)
    recon = fhat_direct_all(c) @ character_group(c).value_matrix(us)
    return float(np.max(np.abs(recon - f_table(c)[us])))


def parseval_deviation(c: int) -> float:
    """``|sum_chi |Fhat(chi)|^2 - 1/phi(c) sum_u |S(u^2,1;c)|^2|``."""
    lhs = float(np.sum(np.abs(fhat_direct_all(c)) ** 2))
    rhs = float(np.sum(np.abs(f_table(c)) ** 2)) / euler_phi(c)
    return abs(lhs - rhs)


# -- averages over the modulus ------------------------------------------------------

class AverageSum(NamedTuple):
    x: int
    total: float
    ratio: float  # total / log x, NaN at x = 1


def _trivial_local_abs(p: int, k: int) -> float:
    if k == 1:
        return 1 / (p - 1)
    return float(p ** (k // 2)) if k % 2 == 0 else 0.0


def avg_trivial_sum(x: int) -> AverageSum:
    """``sum_{c <= x} |Fhat(chi_0 mod c)| / c`` from the closed forms."""
    if x < 1:
        raise DomainError("x must be >= 1")
    total = 0.0
    for c in range(1, x + 1):
        total += math.prod(_trivial_local_abs(p, k) for p, k in factorize(c)) / c
    return AverageSum(x, total, total / math.log(x) if x > 1 else math.nan)


def _semiprimitive_masks(c: int) -> tuple[np.ndarray, np.ndarray]:
    """Semi-primitive mask and conductor of every character mod ``c`` (index order)."""
    mask = np.ones(1, dtype=bool)
    cond = np.ones(1, dtype=np.int64)
    for p, k in factorize(c):
        j = local_group(p, k).conductor_exponents()
        mask = np.logical_and.outer(mask, (j >= 1) & (j < k)).ravel()
        cond = np.multiply.outer(cond, p**j).ravel()
    return mask, cond


@lru_cache(maxsize=None)
def semiprimitive_local_total(p: int, k: int) -> float:
    """``sum |Fhat(chi)|`` over semi-primitive characters modulo ``p^k``."""
    if k < 2:
        return 0.0
    mask, _ = _semiprimitive_masks(p**k)
    return float(np.abs(fhat_all(p**k)[mask]).sum())


def avg_semiprimitive_sum(x: int) -> AverageSum:
    """``sum_{c <= x} sum_{chi semi-primitive mod c} |Fhat(chi)| / c``.

    ``|Fhat|`` is multiplicative and a character is semi-primitive exactly
    when each local component is, so the inner sum factors over ``p^k || c``.
    """
    if x < 1:
        raise DomainError("x must be >= 1")
    total = 0.0
    for c in range(2, x + 1):
        f = factorize(c)
        if any(k < 2 for _, k in f):
            continue
        total += math.prod(semiprimitive_local_total(p, k) for p, k in f) / c
    return AverageSum(x, total, total / math.log(x) if x > 1 else math.nan)


def odd_semiprimitive_support(x: int, tol: float = TOL) -> dict[int, list[int]]:
    """Odd ``c <= x`` with a semi-primitive ``chi`` where ``Fhat(chi) != 0``.

    Maps each such ``c`` to the sorted distinct conductors of those characters.
    Values come from the FFT over the whole unit group mod ``c``.
    """
    out = {}
    for c in range(3, x + 1, 2):
        if any(k < 2 for _, k in factorize(c)):
            continue
        mask, cond = _semiprimitive_masks(c)
        hit = mask & (np.abs(fhat_all(c)) > tol)
        if hit.any():
            out[c] = sorted(set(cond[hit].tolist()))
    return out


def is_b1_b2_squared(c: int) -> bool:
    """Whether ``c = b1 b2^2`` with ``b1`` square-free, ``b1 | b2`` and ``rad(c) = b1``."""
    b1 = radical(c)
    q, r = divmod(c, b1)
    if r:
        return False
    b2 = math.isqrt(q)
    return b2 * b2 == q and b2 % b1 == 0 and is_squarefree(b1)
