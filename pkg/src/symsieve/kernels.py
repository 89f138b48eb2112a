"""Hot inner loops.

Each kernel has a loop implementation compiled with numba (``*_loop``) and
a vectorised numpy implementation (``*_numpy``).  The public names bind to
the loop versions unless numba is unavailable or ``SYMSIEVE_NUMBA=0``.
The two paths sum in different orders and agree to rounding.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

_CHUNK = 1 << 22  # elements per temporary in the numpy paths


# -- Kloosterman sums S(a, 1; c) for many a --------------------------------

@njit
def kloosterman_row_loop(avals, c, inv, cos_table):
    """``S(a, 1; c)`` for each ``a`` in ``avals`` (real part; the sums are real).

    ``inv`` holds inverses on units and -1 elsewhere.  ``a*x mod c`` is
    updated incrementally to avoid a division in the inner loop.
    """
    out = np.zeros(avals.shape[0])
    for i in range(avals.shape[0]):
        a = avals[i] % c
        ax = 0
        acc = 0.0
        for x in range(c):
            xi = inv[x]
            if xi >= 0:
                k = ax + xi
                if k >= c:
                    k -= c
                acc += cos_table[k]
            ax += a
            if ax >= c:
                ax -= c
        out[i] = acc
    return out


def kloosterman_row_numpy(avals, c, inv, cos_table):
    avals = np.asarray(avals, dtype=np.int64) % c
    xs = np.flatnonzero(inv >= 0).astype(np.int64)
    xinv = inv[xs]
    out = np.zeros(avals.shape[0])
    step = max(1, _CHUNK // max(1, xs.size))
    for lo in range(0, avals.shape[0], step):
        a = avals[lo:lo + step, None]
        out[lo:lo + step] = cos_table[(a * xs[None, :] + xinv[None, :]) % c].sum(axis=1)
    return out


# -- the double sum over (u, t) grouped by the product u*t ------------------

@njit
def product_grouped_sum_loop(c, cos_table, sin_table):
    """``G[v] = sum_{u t = v (mod c)} e_c(t (u+1)^2)`` over all ``u, t mod c``."""
    gre = np.zeros(c)
    gim = np.zeros(c)
    for u in range(c):
        s = (u + 1) % c
        s = s * s % c
        v = 0
        k = 0
        for t in range(c):
            gre[v] += cos_table[k]
            gim[v] += sin_table[k]
            v += u
            if v >= c:
                v -= c
            k += s
            if k >= c:
                k -= c
    return gre + 1j * gim


def product_grouped_sum_numpy(c, cos_table, sin_table):
    t = np.arange(c, dtype=np.int64)
    gre = np.zeros(c)
    gim = np.zeros(c)
    for u in range(c):
        s = (u + 1) * (u + 1) % c
        v = u * t % c
        k = s * t % c
        gre += np.bincount(v, weights=cos_table[k], minlength=c)
        gim += np.bincount(v, weights=sin_table[k], minlength=c)
    return gre + 1j * gim


# -- Dirichlet polynomial mean values --------------------------------------

@njit
def mvt_offdiagonal_loop(logs, a, T):
    """``sum_{m != n} a_m conj(a_n) ((m/n)^{iT} - 1) / (i log(m/n))``.

    Written as ``2 e^{iTL/2} sin(TL/2) / L`` with ``L = log m - log n`` for
    stability when ``L`` is small.  ``logs`` must be distinct.
    """
    n = logs.shape[0]
    acc = 0.0 + 0.0j
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        row = 0.0 + 0.0j
        for j in range(n):
            if j == i:
                continue
            L = logs[i] - logs[j]
            h = 0.5 * T * L
            row += np.conj(a[j]) * (2.0 * np.sin(h) / L) * (np.cos(h) + 1j * np.sin(h))
        acc += ai * row
    return acc


def mvt_offdiagonal_numpy(logs, a, T):
    logs = np.asarray(logs, dtype=np.float64)
    a = np.asarray(a, dtype=np.complex128)
    n = logs.shape[0]
    acc = 0j
    step = max(1, _CHUNK // max(1, n))
    for lo in range(0, n, step):
        L = logs[lo:lo + step, None] - logs[None, :]
        idx = np.arange(lo, min(lo + step, n))
        L[idx - lo, idx] = 1.0
        h = 0.5 * T * L
        kern = 2.0 * np.sin(h) / L * np.exp(1j * h)
        kern[idx - lo, idx] = 0.0
        acc += np.sum(a[lo:lo + step] * (kern @ np.conj(a)))
    return acc


# -- tau_{it}(n^2) on a grid of t ------------------------------------------

@njit
def divisor_cosine_table_loop(t, offsets, freqs):
    """``V[q, i] = sum_{f in freqs[offsets[i]:offsets[i+1]]} cos(t_q f)``."""
    nq = t.shape[0]
    m = offsets.shape[0] - 1
    V = np.zeros((nq, m))
    for q in range(nq):
        tq = t[q]
        for i in range(m):
            acc = 0.0
            for j in range(offsets[i], offsets[i + 1]):
                acc += np.cos(tq * freqs[j])
            V[q, i] = acc
    return V


def divisor_cosine_table_numpy(t, offsets, freqs):
    t = np.asarray(t, dtype=np.float64)
    m = offsets.shape[0] - 1
    V = np.zeros((t.shape[0], m))
    for i in range(m):
        f = freqs[offsets[i]:offsets[i + 1]]
        V[:, i] = np.cos(np.outer(t, f)).sum(axis=1)
    return V


# -- partial sums of the zeta series ---------------------------------------

@njit
def zeta_head_loop(s, N):
    """``sum_{n=1}^{N-1} n^{-s}`` for each complex ``s``."""
    out = np.zeros(s.shape[0], dtype=np.complex128)
    for i in range(s.shape[0]):
        si = s[i]
        acc = 0.0 + 0.0j
        for n in range(1, N):
            acc += np.exp(-si * np.log(n))
        out[i] = acc
    return out


def zeta_head_numpy(s, N):
    s = np.asarray(s, dtype=np.complex128)
    logn = np.log(np.arange(1, N, dtype=np.float64))
    out = np.zeros(s.shape[0], dtype=np.complex128)
    step = max(1, _CHUNK // max(1, logn.size))
    for lo in range(0, s.shape[0], step):
        out[lo:lo + step] = np.exp(-np.outer(s[lo:lo + step], logn)).sum(axis=1)
    return out


if USE_NUMBA:
    kloosterman_row = kloosterman_row_loop
    product_grouped_sum = product_grouped_sum_loop
    mvt_offdiagonal = mvt_offdiagonal_loop
    divisor_cosine_table = divisor_cosine_table_loop
    zeta_head = zeta_head_loop
else:
    kloosterman_row = kloosterman_row_numpy
    product_grouped_sum = product_grouped_sum_numpy
    mvt_offdiagonal = mvt_offdiagonal_numpy
    divisor_cosine_table = divisor_cosine_table_numpy
    zeta_head = zeta_head_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
