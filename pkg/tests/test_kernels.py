import os
import subprocess
import sys

import numpy as np
import pytest

from symsieve import kernels
from symsieve.arith import inverse_table

rng = np.random.default_rng(7)


def tables(c):
    theta = 2 * np.pi * np.arange(c) / c
    return np.cos(theta), np.sin(theta)


@pytest.mark.parametrize("c", [1, 2, 9, 97, 360])
def test_kloosterman_row(c):
    cos, _ = tables(c)
    avals = np.arange(c, dtype=np.int64)
    inv = inverse_table(c)
    a = kernels.kloosterman_row_loop(avals, c, inv, cos)
    b = kernels.kloosterman_row_numpy(avals, c, inv, cos)
    assert np.allclose(a, b, atol=1e-10)


@pytest.mark.parametrize("c", [1, 2, 12, 101])
def test_product_grouped_sum(c):
    cos, sin = tables(c)
    a = kernels.product_grouped_sum_loop(c, cos, sin)
    b = kernels.product_grouped_sum_numpy(c, cos, sin)
    assert np.allclose(a, b, atol=1e-9)


def test_mvt_offdiagonal():
    logs = np.log(np.arange(50, 151, dtype=np.float64))
    a = rng.standard_normal(logs.size) + 1j * rng.standard_normal(logs.size)
    x = kernels.mvt_offdiagonal_loop(logs, a, 37.5)
    y = kernels.mvt_offdiagonal_numpy(logs, a, 37.5)
    assert abs(x - y) < 1e-9 * max(1, abs(x))


def test_divisor_cosine_table():
    t = np.linspace(100, 120, 333)
    freqs = rng.uniform(-10, 10, 40)
    offsets = np.array([0, 3, 3, 17, 40], dtype=np.int64)
    assert np.allclose(kernels.divisor_cosine_table_loop(t, offsets, freqs),
                       kernels.divisor_cosine_table_numpy(t, offsets, freqs), atol=1e-10)


def test_zeta_head():
    s = np.array([2, 1 + 3j, 0.5 + 100j], dtype=np.complex128)
    assert np.allclose(kernels.zeta_head_loop(s, 57), kernels.zeta_head_numpy(s, 57), atol=1e-12)


def test_backend_switch():
    env = dict(os.environ, SYMSIEVE_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", "from symsieve import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_numpy_backend_gives_same_results(tmp_path):
    path = tmp_path / "fhat.npy"
    code = f"from symsieve.fhat import fhat_all; import numpy as np; np.save({str(path)!r}, fhat_all(360))"
    env = dict(os.environ, SYMSIEVE_NUMBA="0")
    subprocess.run([sys.executable, "-c", code], env=env, check=True)
    from symsieve.fhat import fhat_all
    assert np.allclose(np.load(path), fhat_all(360), atol=1e-10)
