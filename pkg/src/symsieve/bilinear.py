"""Bilinear-form norms for the Eisenstein family on a finite support.

For a window ``T <= t <= T + Delta`` and a support ``S`` inside ``[N, 2N]``
the norm

    max_{|a| = 1} int_T^{T+Delta} w_t^{-1} |sum_{n in S} a_n tau_it(n^2)|^2 dt,
    w_t = |zeta(1 + 2it)|^2,

is the top eigenvalue of the Gram matrix
``G[m, n] = int w_t^{-1} tau_it(m^2) tau_it(n^2) dt`` (``tau_it`` is real).
Entries are computed with composite Gauss-Legendre quadrature on panels no
wider than a quarter period of the fastest oscillation, and checked by
halving the panel width.

Also here: mean values of Dirichlet polynomials and the large-sieve sum
over primitive characters in closed form, the finite reparameterization
behind the divisor-restricted large sieve, and reference bound curves.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .arith import DomainError, d_prime, divisors, is_squarefree, moebius, primes_in
from .characters import character_group, primitive_characters
from .quadrature import RULE_ORDER, composite_rule, panels_for
from .zeta import eis_weight

GRAM_RTOL = 1e-6
MAX_SUPPORT = 512


class ConvergenceError(RuntimeError):
    """Iteration stopped at its cap; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class QuadratureWarning(RuntimeWarning):
    pass


# -- tau_it -----------------------------------------------------------------

def _tau_freqs(n: int) -> np.ndarray:
    """``log(a / b)`` over factorizations ``ab = n``."""
    ln = math.log(n)
    return np.array([2 * math.log(a) - ln for a in divisors(n)])


def tau_it(n: int, t):
    """``tau_it(n) = sum_{ab = n} (a/b)^{it}``, real by pairing ``a <-> b``."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    t_arr = np.asarray(t, dtype=np.float64)
    vals = np.cos(np.multiply.outer(t_arr, _tau_freqs(n))).sum(axis=-1)
    return float(vals) if t_arr.ndim == 0 else vals


def _tau_square_table(support, t: np.ndarray) -> np.ndarray:
    """``V[q, i] = tau_{i t_q}(n_i^2)``."""
    freqs = [_tau_freqs(int(n) ** 2) for n in support]
    offsets = np.zeros(len(freqs) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(f) for f in freqs])
    return kernels.divisor_cosine_table(np.ascontiguousarray(t, dtype=np.float64), offsets,
                                        np.concatenate(freqs))


# -- windows and Gram matrices ------------------------------------------------

@dataclass(frozen=True)
class FamilyWindow:
    T: float
    Delta: float
    N: int
    support: tuple[int, ...]

    def __post_init__(self):
        if self.T < 10:
            raise DomainError(f"T must be >= 10, got {self.T}")
        if not (0 < self.Delta <= self.T):
            raise DomainError(f"need 0 < Delta <= T, got Delta={self.Delta}, T={self.T}")
        if self.N < 1:
            raise DomainError(f"N must be positive, got {self.N}")
        if not self.support:
            raise DomainError("empty support")
        if any(not (self.N <= n <= 2 * self.N) for n in self.support):
            raise DomainError(f"support must lie in [{self.N}, {2 * self.N}]")
        if len(set(self.support)) != len(self.support):
            raise DomainError("support has repeated entries")

    @classmethod
    def primes(cls, T: float, Delta: float, N: int, hi: int | None = None) -> "FamilyWindow":
        """Primes in ``[N, hi]`` (default ``hi = 2N``)."""
        return cls(T, Delta, N, tuple(primes_in(N, 2 * N if hi is None else hi)))

    @property
    def max_panel_width(self) -> float:
        # tau_it(m^2) tau_it(n^2) has log-frequencies up to 4 log(2N)
        return math.pi / (8 * math.log(2 * self.N))


@dataclass(frozen=True)
class GramMatrix:
    window: FamilyWindow
    entries: np.ndarray
    panels: int
    order: int
    error_estimate: float
    converged: bool

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def hermitian_deviation(self) -> float:
        G = self.entries
        return float(np.max(np.abs(G - G.conj().T)) / max(np.max(np.abs(G)), 1e-300))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])

    def is_psd(self, rtol: float = 1e-6) -> bool:
        return self.min_eigenvalue() >= -rtol * float(np.trace(self.entries).real)


def _gram_at(window: FamilyWindow, panels: int, order: int) -> np.ndarray:
    rule = composite_rule(window.T, window.T + window.Delta, panels, order)
    V = _tau_square_table(window.support, rule.nodes)
    scale = rule.weights / eis_weight(rule.nodes)
    G = V.T @ (scale[:, None] * V)
    return 0.5 * (G + G.T)


def _relative_change(G1: np.ndarray, G2: np.ndarray) -> float:
    d = np.sqrt(np.abs(np.outer(np.diag(G2), np.diag(G2))))
    return float(np.max(np.abs(G2 - G1) / np.maximum(d, 1e-300)))


def gram_assemble(window: FamilyWindow, order: int = RULE_ORDER, rtol: float = GRAM_RTOL,
                  max_refinements: int = 3) -> GramMatrix:
    """Gram matrix of ``tau_it(n^2)`` under ``w_t^{-1} dt`` on the window.

    The panel count starts from the quarter-period rule and doubles until
    one halving changes every entry by less than ``rtol`` relative to
    ``sqrt(G_ii G_jj)``.  Failure to get there is flagged with a warning
    and ``converged = False``.
    """
    if len(window.support) > MAX_SUPPORT:
        raise DomainError(f"support size {len(window.support)} exceeds {MAX_SUPPORT}")
    panels = panels_for(window.T, window.T + window.Delta, window.max_panel_width)
    coarse = _gram_at(window, panels, order)
    for _ in range(max_refinements + 1):
        fine = _gram_at(window, 2 * panels, order)
        err = _relative_change(coarse, fine)
        panels *= 2
        if err < rtol:
            return GramMatrix(window, fine, panels, order, err, True)
        coarse = fine
    warnings.warn(f"Gram quadrature did not converge: relative change {err:.3g}", QuadratureWarning)
    return GramMatrix(window, fine, panels, order, err, False)


# -- power iteration ------------------------------------------------------------

class EigenResult(NamedTuple):
    value: float
    vector: np.ndarray
    iterations: int
    history: np.ndarray   # Rayleigh quotient at each step


def top_eigenvalue(G, rtol: float = 1e-10, patience: int = 5, max_iter: int = 10_000,
                   seed: int = 0) -> EigenResult:
    """Dominant eigenpair of a Hermitian PSD matrix by power iteration.

    Stops once the Rayleigh quotient has changed by less than ``rtol``
    (relative) for ``patience`` consecutive steps.  The start vector comes
    from ``numpy.random.default_rng(seed)``.
    """
    A = G.entries if isinstance(G, GramMatrix) else np.asarray(G)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("expected a square matrix")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix has non-finite entries")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(A.shape[0])
    if np.iscomplexobj(A):
        x = x + 1j * rng.standard_normal(A.shape[0])
    x = x / np.linalg.norm(x)
    history = []
    quiet = 0
    rq = 0.0
    for it in range(1, max_iter + 1):
        y = A @ x
        rq_new = float(np.real(np.vdot(x, y)))
        history.append(rq_new)
        norm = np.linalg.norm(y)
        if norm == 0:
            return EigenResult(0.0, x, it, np.array(history))
        x = y / norm
        if it > 1 and abs(rq_new - rq) <= rtol * abs(rq_new):
            quiet += 1
            if quiet >= patience:
                return EigenResult(rq_new, x, it, np.array(history))
        else:
            quiet = 0
        rq = rq_new
    best = EigenResult(rq, x, max_iter, np.array(history))
    raise ConvergenceError(f"power iteration did not settle in {max_iter} steps", best)


# -- lower-bound experiment on primes -----------------------------------------------

@dataclass(frozen=True)
class LowerBoundReport:
    T: float
    Delta: float
    N: int
    A: int
    diag: float
    cross: float
    square: float
    max_weight: float
    weighted: float
    panels: int
    error_estimate: float
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def full(self) -> float:
        return self.diag + self.cross + self.square

    @property
    def ratio(self) -> float:
        return self.full / self.diag

    @property
    def implied_lower_bound(self) -> float:
        """``full / (max_t w_t |a|^2)``; a lower bound for the weighted norm."""
        return self.full / (self.max_weight * self.A)

    @property
    def weighted_rayleigh(self) -> float:
        """``int w_t^{-1} |sum_p tau_it(p^2)|^2 dt / A`` (Rayleigh quotient at ``a = 1``)."""
        return self.weighted / self.A

    @property
    def reference_scale(self) -> float:
        return self.Delta * self.N / math.log(self.N) ** 2

    def row(self) -> dict:
        return {
            "T": self.T, "Delta": self.Delta, "N": self.N, "A": self.A,
            "diag": self.diag, "cross": self.cross, "square": self.square,
            "ratio": self.ratio, "implied_lower_bound": self.implied_lower_bound,
        }


def _prime_integrals(T: float, Delta: float, logs2: np.ndarray, A: int, panels: int):
    rule = composite_rule(T, T + Delta, panels)
    offsets = np.array([0, logs2.size], dtype=np.int64)
    B = 2 * kernels.divisor_cosine_table(rule.nodes, offsets, logs2)[:, 0]
    w = eis_weight(rule.nodes)
    cross = float(rule.weights @ (2 * A * B))
    square = float(rule.weights @ (B * B))
    weighted = float(rule.weights @ ((A + B) ** 2 / w))
    return cross, square, weighted, float(w.max())


def lower_bound_experiment(T: float, Delta: float, N: int, rtol: float = GRAM_RTOL,
                           max_refinements: int = 3) -> LowerBoundReport:
    """``a_p = 1`` on primes in ``[N, 2N]``, where ``tau_it(p^2) = 1 + B_p(t)``.

    The diagonal ``int A^2 dt = Delta A^2`` is exact; the cross term
    ``int 2 A B`` and the square ``int B^2`` use quadrature, with
    ``B(t) = sum_p 2 cos(2 t log p)``.  ``max_weight`` is the largest
    ``w_t`` seen on the quadrature nodes.
    """
    if T < 50 or Delta < 5 or N > 10**4 or N < 2:
        raise DomainError("lower_bound_experiment needs T >= 50, Delta >= 5, 2 <= N <= 10^4")
    if Delta > T:
        raise DomainError("need Delta <= T")
    primes = np.array(primes_in(N, 2 * N), dtype=np.float64)
    A = primes.size
    logs2 = np.ascontiguousarray(2 * np.log(primes))
    panels = panels_for(T, T + Delta, math.pi / (8 * math.log(2 * N)))
    prev = _prime_integrals(T, Delta, logs2, A, panels)
    diag = Delta * A * A
    for _ in range(max_refinements + 1):
        panels *= 2
        cur = _prime_integrals(T, Delta, logs2, A, panels)
        err = abs((cur[0] + cur[1]) - (prev[0] + prev[1])) / (diag + abs(cur[0] + cur[1]))
        if err < rtol:
            break
        prev = cur
    else:
        warnings.warn(f"lower-bound quadrature did not converge: {err:.3g}", QuadratureWarning)
    cross, square, weighted, max_w = cur
    return LowerBoundReport(T, Delta, N, A, diag, cross, square, max_w, weighted, panels, err)


def doubling_exponent(T: float, Delta: float, N: int) -> float:
    """``log2`` of the growth of the full integral from ``N`` to ``2N``."""
    a = lower_bound_experiment(T, Delta, N).full
    b = lower_bound_experiment(T, Delta, 2 * N).full
    return math.log2(b / a)


# -- mean values of Dirichlet polynomials ------------------------------------

class MeanValue(NamedTuple):
    integral: float
    bound_ratio: float


def _prepare(ns, a):
    ns = np.asarray(ns, dtype=np.int64)
    a = np.asarray(a, dtype=np.complex128)
    if ns.shape != a.shape or ns.ndim != 1:
        raise DomainError("ns and a must be matching 1-d arrays")
    if np.any(ns < 1) or np.unique(ns).size != ns.size:
        raise DomainError("ns must be distinct positive integers")
    return ns, a


def _mean_value(T: float, ns: np.ndarray, a: np.ndarray) -> float:
    """``int_0^T |sum a_n n^{it}|^2 dt`` in closed form."""
    logs = np.log(ns.astype(np.float64))
    diag = T * float(np.sum(np.abs(a) ** 2))
    off = kernels.mvt_offdiagonal(np.ascontiguousarray(logs), np.ascontiguousarray(a), float(T))
    return diag + float(np.real(off))


def mvt_dirichlet_poly(T: float, ns, a, N: int | None = None) -> MeanValue:
    """Closed-form mean value and its ratio to ``(T + N) |a|^2``.

    ``N`` defaults to the smallest ``n``, the start of the block ``[N, 2N]``.
    """
    ns, a = _prepare(ns, a)
    N = int(ns.min()) if N is None else N
    integral = _mean_value(T, ns, a)
    return MeanValue(integral, integral / ((T + N) * float(np.sum(np.abs(a) ** 2))))


def mvt_quadrature(T: float, ns, a, rtol: float = 1e-10) -> float:
    """The same integral by composite Gauss-Legendre (an independent oracle)."""
    ns, a = _prepare(ns, a)
    logs = np.log(ns.astype(np.float64))
    spread = max(float(logs.max() - logs.min()), 1.0 / max(T, 1.0))
    panels = panels_for(0.0, T, math.pi / (8 * spread))

    def at(p):
        rule = composite_rule(0.0, T, p)
        total = 0.0
        for lo in range(0, rule.nodes.size, 4096):
            t = rule.nodes[lo:lo + 4096]
            P = np.exp(1j * np.outer(t, logs)) @ a
            total += float(rule.weights[lo:lo + 4096] @ (np.abs(P) ** 2))
        return total

    prev = at(panels)
    for _ in range(6):
        panels *= 2
        cur = at(panels)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return cur


class LargeSieve(NamedTuple):
    lhs: float
    rhs_normalized: float


def gallagher_lhs(Q: int, T: float, N: int, a, ns=None) -> LargeSieve:
    """``sum_{q <= Q} sum*_{chi mod q} int_0^T |sum_n a_n chi(n) n^{it}|^2 dt``.

    ``a`` holds ``a_1 .. a_N`` unless ``ns`` lists the indices.  Returns the
    sum and its ratio to ``(Q^2 T + N) |a|^2``.
    """
    if Q < 1:
        raise DomainError("Q must be >= 1")
    if ns is None:
        ns = np.arange(1, N + 1)
    ns, a = _prepare(ns, a)
    lhs = 0.0
    for q in range(1, Q + 1):
        prims = [chi.index for chi in primitive_characters(q)]
        if not prims:
            continue
        vals = character_group(q).value_matrix(ns)[prims]
        for row in vals:
            b = a * row
            keep = row != 0
            if np.any(keep):
                lhs += _mean_value(T, ns[keep], b[keep])
    norm = float(np.sum(np.abs(a) ** 2))
    return LargeSieve(lhs, lhs / ((Q * Q * T + N) * norm))


# -- reparameterization of pairs with d | (m^2, n^2), g | mn/d -----------------------

def _direct_pairs(d: int, g: int, N: int) -> np.ndarray:
    r = np.arange(N + 1, dtype=np.int64)
    sq_ok = (r * r) % d == 0
    sq_ok[0] = False
    m, n = np.meshgrid(r, r, indexing="ij")
    mask = sq_ok[:, None] & sq_ok[None, :]
    mn = m * n
    mask &= (mn % d == 0)
    mask &= ((mn // d) % g == 0)
    return mask.astype(np.int64)


def _reparam_counts(d: int, g: int, N: int) -> np.ndarray:
    """Multiplicity of each ``(m, n)`` produced by the generative enumeration.

    ``m = h m' g1``, ``n = h n' g2`` with ``d' | h``, ``g1 g2 = g / (g, h^2/d)``
    and ``(m' g1, n' g2) = 1`` detected by ``sum_{l | (., .)} mu(l)``.
    """
    counts = np.zeros((N + 1, N + 1), dtype=np.int64)
    dp = d_prime(d)
    for h in range(dp, N + 1, dp):
        G = g // math.gcd(g, h * h // d)
        for g1 in divisors(G):
            g2 = G // g1
            top = N // h
            for ell in range(1, top + 1):
                mu = moebius(ell)
                if not mu:
                    continue
                s1 = g1 * ell // math.gcd(g1, ell)
                s2 = g2 * ell // math.gcd(g2, ell)
                if s1 > top or s2 > top:
                    continue
                ms = h * np.arange(s1, top + 1, s1)
                ns = h * np.arange(s2, top + 1, s2)
                counts[np.ix_(ms, ns)] += mu
    return counts


def reparam_mismatches(d: int, g: int, N: int) -> int:
    """Number of pairs whose generated multiplicity differs from the indicator."""
    if d < 1 or g < 1 or N < 1:
        raise DomainError("d, g, N must be positive")
    if not is_squarefree(g):
        raise DomainError(f"g = {g} is not square-free")
    return int(np.count_nonzero(_direct_pairs(d, g, N) != _reparam_counts(d, g, N)))


def corollary23_reparam_check(d: int, g: int, N: int) -> bool:
    """Whether the reparameterization hits every admissible pair exactly once."""
    return reparam_mismatches(d, g, N) == 0


# -- reference curves -----------------------------------------------------------

class CurveRecord(NamedTuple):
    Delta: float
    T: float
    N: float
    branch: int
    mainthm: float
    mainthm_alt: float
    sym2_trivial: float
    duke_kowalski: float

    @property
    def consistency_ratio(self) -> float:
        """``max(a/b, b/a)`` for the piecewise and the combined form."""
        r = self.mainthm_alt / self.mainthm
        return max(r, 1 / r)


def mainthm_branch(T: float, N: float) -> int:
    if N <= T:
        return 1
    if N <= T * T:
        return 2
    return 3


def mainthm_piecewise(Delta: float, T: float, N: float) -> float:
    b = mainthm_branch(T, N)
    if b == 1:
        return Delta * T + math.sqrt(T) * N
    if b == 2:
        return Delta * N + N**1.5
    return N * N / T


def theorem_curves(Delta: float, T: float, N: float) -> CurveRecord:
    """All bound shapes with epsilon-powers and constants set to 1."""
    if min(Delta, T, N) <= 0:
        raise DomainError("Delta, T, N must be positive")
    return CurveRecord(
        Delta, T, N, mainthm_branch(T, N),
        mainthm_piecewise(Delta, T, N),
        Delta * (T + N) + N * math.sqrt(T + N) + N * N / T,
        Delta * T + N * N,
        N + Delta**1.5 * T**2.5 * math.sqrt(N),
    )


def curve_grid(T_values=(10.0, 100.0, 1000.0, 10000.0), delta_fracs=None, n_exponents=None):
    """Curves on a log grid: ``Delta = T * f`` and ``N = 10^e``."""
    if delta_fracs is None:
        delta_fracs = 10.0 ** np.arange(-3, 0.01, 0.5)
    if n_exponents is None:
        n_exponents = np.arange(0, 9.01, 0.25)
    return [theorem_curves(T * f, T, 10.0**e) for T in T_values for f in delta_fracs for e in n_exponents]


def branch_jumps(Delta: float, T: float) -> tuple[float, float]:
    """Ratios of adjacent branches at ``N = T`` and ``N = T^2``."""
    j1 = (Delta * T + math.sqrt(T) * T) / (Delta * T + T**1.5)
    j2 = (Delta * T * T + T**3) / (T**4 / T)
    return j1, j2
