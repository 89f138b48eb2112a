"""Time the numba loop kernels against the numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 3]

The loop kernels are called once before timing so compilation is excluded.
"""
import argparse
import timeit

import numpy as np

from symsieve import kernels
from symsieve.arith import inverse_table


def cases():
    rng = np.random.default_rng(0)
    c = 2999
    theta = 2 * np.pi * np.arange(c) / c
    cos, sin = np.cos(theta), np.sin(theta)
    inv = inverse_table(c)
    avals = np.arange(c, dtype=np.int64)
    yield "kloosterman_row c=2999", (avals, c, inv, cos)
    c2 = 1500
    th2 = 2 * np.pi * np.arange(c2) / c2
    yield "product_grouped_sum c=1500", (c2, np.cos(th2), np.sin(th2))
    logs = np.log(np.arange(1000, 3001, dtype=np.float64))
    a = rng.standard_normal(logs.size) + 1j * rng.standard_normal(logs.size)
    yield "mvt_offdiagonal n=2001", (logs, a, 200.0)
    t = np.linspace(100, 140, 20000)
    freqs = rng.uniform(-30, 30, 600)
    offsets = np.arange(0, 601, 3, dtype=np.int64)
    yield "divisor_cosine_table 20000x200", (t, offsets, freqs)
    s = 1 + 2j * np.linspace(10, 1000, 2000)
    yield "zeta_head 2000 points, N=330", (s, 330)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = ["kloosterman_row", "product_grouped_sum", "mvt_offdiagonal",
             "divisor_cosine_table", "zeta_head"]
    print(f"{'kernel':34s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}")
    for name, (label, argv) in zip(names, cases()):
        loop = getattr(kernels, name + "_loop")
        vec = getattr(kernels, name + "_numpy")
        loop(*argv)
        t_loop = min(timeit.repeat(lambda: loop(*argv), number=1, repeat=args.repeat))
        t_vec = min(timeit.repeat(lambda: vec(*argv), number=1, repeat=args.repeat))
        print(f"{label:34s} {t_loop:10.4f} {t_vec:10.4f} {t_vec / t_loop:8.1f}x")


if __name__ == "__main__":
    main()
