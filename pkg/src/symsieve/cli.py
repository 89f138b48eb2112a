"""Command line front end: verification suites, scans and experiments.

Exit codes: 0 success, 1 numeric or I/O failure, 2 usage error,
3 verification failure (the report is still written).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Iterable

import numpy as np

from . import __version__, suites
from .arith import DomainError, primes_in
from .bilinear import (ConvergenceError, FamilyWindow, curve_grid, gallagher_lhs, gram_assemble,
                       lower_bound_experiment, mvt_dirichlet_poly, theorem_curves, top_eigenvalue)
from .fhat import scan_modulus

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- formatting ----------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _json_value(x) -> str:
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in x) + "]"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return format(x, ".17g") if math.isfinite(x) else "null"
    if x is None:
        return "null"
    return json.dumps(str(x))


def render(rows: list[dict], config: dict, fmt_name: str, summary: dict) -> str:
    if fmt_name == "json":
        doc = {"schema_version": SCHEMA_VERSION, "config": config, "summary": summary, "rows": rows}
        return _json_value(doc) + "\n"
    lines = ["# symsieve " + _json_value(config)]
    if rows:
        cols = list(rows[0])
        lines.append(",".join(cols))
        lines.extend(",".join(fmt(r[c]) for c in cols) for r in rows)
    return "\n".join(lines) + "\n"


def write_output(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- argument helpers ----------------------------------------------------------------

def parse_range(text: str) -> tuple[int, int]:
    """``a..b`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}, expected a..b")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def parse_support(text: str) -> list[int]:
    """``primes:a..b``, ``range:a..b`` or ``list:n1,n2,...``."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "primes":
            lo, hi = parse_range(rest)
            return primes_in(lo, hi)
        if kind == "range":
            lo, hi = parse_range(rest)
            return list(range(lo, hi + 1))
        if kind == "list":
            return [int(x) for x in rest.split(",") if x]
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"bad support {text!r}")


def tolerance(text: str) -> float:
    x = float(text)
    if not (0 < x <= 1e-3):
        raise argparse.ArgumentTypeError("tolerances must lie in (0, 1e-3]")
    return x


def resolve_threads(cli_value: int | None) -> int:
    env = os.environ.get("SYMSIEVE_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"SYMSIEVE_THREADS must be an integer, got {env!r}")
    else:
        n = cli_value if cli_value is not None else 1
    if n < 1:
        raise UsageError("thread count must be >= 1")
    return n


# -- subcommands ------------------------------------------------------------------

def cmd_verify(args, threads: int):
    suite = args.suite
    kw: dict = {"threads": threads}
    tol = args.tol
    if suite == "selberg":
        kw.update(mmax=args.mmax or 12, cmax=args.cmax or 60)
    elif suite == "vanishing":
        kw.update(pmax=args.pmax or 13, kmax=args.kmax or 3)
    elif suite == "fhat-defs":
        kw.update(cmax=args.cmax or 100)
    elif suite == "fhat-closed":
        kw.update(limit=args.qmax, pmax=args.pmax, kmax=args.kmax, direct=args.direct)
    elif suite == "multiplicativity":
        kw.update(pairs=args.pairs, cmax=args.cmax or 10_000, seed=args.seed)
    elif suite == "decomposition":
        kw.update(mmax=args.mmax or 12)
    elif suite == "parseval":
        kw.update(cmax=args.cmax or 300)
    if tol is not None and suite in ("selberg", "vanishing", "fhat-defs", "fhat-closed",
                                     "multiplicativity"):
        kw["tol"] = tol
    rows = suites.SUITES[suite](**kw)
    failed = sum(not r["passed"] for r in rows)
    summary = {"suite": suite, "cases": len(rows), "failed": failed,
               "max_deviation": max((r["max_deviation"] for r in rows), default=0.0)}
    return rows, summary, failed == 0


def cmd_scan_fhat(args, threads: int):
    lo, hi = args.c_range
    if lo < 1 or hi > 10**5:
        raise UsageError("--c-range must lie within [1, 100000]")
    reports = suites.parallel_map(scan_modulus, range(lo, hi + 1), threads)
    rows = [rep.row() for reps in reports for rep in reps]
    failed = sum(not r["agree"] for r in rows)
    return rows, {"rows": len(rows), "disagreements": failed}, failed == 0


def cmd_gram(args, threads: int):
    support = sorted(set(args.support))
    if not support:
        raise UsageError("empty support")
    N = args.n if args.n is not None else support[0]
    window = FamilyWindow(args.t, args.delta, N, tuple(support))
    G = gram_assemble(window)
    if args.emit == "matrix":
        rows = [{"m": m, "n": n, "entry": float(G.entries[i, j])}
                for i, m in enumerate(support) for j, n in enumerate(support)]
    else:
        eig = top_eigenvalue(G)
        rows = [{
            "T": args.t, "Delta": args.delta, "N": N, "size": G.size,
            "top_eigenvalue": eig.value, "iterations": eig.iterations,
            "max_diagonal": float(np.max(np.diag(G.entries))),
            "min_eigenvalue": G.min_eigenvalue(), "hermitian_deviation": G.hermitian_deviation(),
            "panels": G.panels, "error_estimate": G.error_estimate, "converged": G.converged,
        }]
    return rows, {"converged": G.converged}, True


def cmd_lowerbound(args, threads: int):
    rep = lower_bound_experiment(args.t, args.delta, args.n)
    return [rep.row()], {"weighted_rayleigh": rep.weighted_rayleigh,
                         "max_weight": rep.max_weight, "panels": rep.panels,
                         "error_estimate": rep.error_estimate}, True


def _n_grid(text: str, T: float) -> Iterable[float]:
    if text == "log":
        return [10.0 ** (e / 4) for e in range(0, 4 * max(1, math.ceil(2.5 * math.log10(T))) + 1)]
    return [float(x) for x in text.split(",") if x]


def cmd_curves(args, threads: int):
    rows = []
    for N in _n_grid(args.n_grid, args.t):
        rec = theorem_curves(args.delta, args.t, N)
        rows.append({"Delta": rec.Delta, "T": rec.T, "N": rec.N, "branch": rec.branch,
                     "mainthm": rec.mainthm, "mainthm_alt": rec.mainthm_alt,
                     "sym2_trivial": rec.sym2_trivial, "duke_kowalski": rec.duke_kowalski})
    worst = max(theorem_curves(r["Delta"], r["T"], r["N"]).consistency_ratio for r in rows)
    return rows, {"max_consistency_ratio": worst, "grid_max": max(
        c.consistency_ratio for c in curve_grid((args.t,)))}, True


def cmd_largesieve(args, threads: int):
    rng = np.random.default_rng(args.seed)
    rows = []
    for trial in range(args.trials):
        a = rng.standard_normal(args.n) + 1j * rng.standard_normal(args.n)
        a /= np.linalg.norm(a)
        res = gallagher_lhs(args.q, args.t, args.n, a)
        mv = mvt_dirichlet_poly(args.t, np.arange(1, args.n + 1), a, N=args.n)
        rows.append({"Q": args.q, "T": args.t, "N": args.n, "trial": trial, "lhs": res.lhs,
                     "ratio": res.rhs_normalized, "mvt_integral": mv.integral,
                     "mvt_ratio": mv.bound_ratio})
    return rows, {"max_ratio": max(r["ratio"] for r in rows)}, True


COMMANDS = {
    "verify": cmd_verify,
    "scan-fhat": cmd_scan_fhat,
    "gram": cmd_gram,
    "lowerbound": cmd_lowerbound,
    "curves": cmd_curves,
    "largesieve": cmd_largesieve,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (SYMSIEVE_THREADS overrides)")
    common.add_argument("--tol", type=tolerance, default=None, help="tolerance override")

    parser = argparse.ArgumentParser(prog="symsieve", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"symsieve {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(suites.SUITES))
    v.add_argument("--cmax", type=int, default=None)
    v.add_argument("--mmax", type=int, default=None)
    v.add_argument("--pmax", type=int, default=None)
    v.add_argument("--kmax", type=int, default=None)
    v.add_argument("--qmax", type=int, default=3000, help="largest prime power for fhat-closed")
    v.add_argument("--direct", action="store_true", help="fhat-closed: use the defining sum")
    v.add_argument("--pairs", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("scan-fhat", parents=[common], help="Fhat for every character in a range of moduli")
    s.add_argument("--c-range", type=parse_range, required=True, metavar="A..B")

    g = sub.add_parser("gram", parents=[common], help="Gram matrix and its top eigenvalue")
    g.add_argument("--t", type=float, required=True)
    g.add_argument("--delta", type=float, required=True)
    g.add_argument("--support", type=parse_support, required=True,
                   help="primes:a..b, range:a..b or list:n1,n2,...")
    g.add_argument("--n", type=int, default=None, help="block start N (default: min of support)")
    g.add_argument("--emit", choices=("eigen", "matrix"), default="eigen")

    lb = sub.add_parser("lowerbound", parents=[common], help="prime-supported lower-bound experiment")
    lb.add_argument("--t", type=float, required=True)
    lb.add_argument("--delta", type=float, required=True)
    lb.add_argument("--n", type=int, required=True)

    c = sub.add_parser("curves", parents=[common], help="reference bound curves")
    c.add_argument("--t", type=float, required=True)
    c.add_argument("--delta", type=float, required=True)
    c.add_argument("--n-grid", default="log", help="'log' or a comma-separated list of N")

    ls = sub.add_parser("largesieve", parents=[common], help="large-sieve ratio on random vectors")
    ls.add_argument("--q", type=int, required=True)
    ls.add_argument("--t", type=float, required=True)
    ls.add_argument("--n", type=int, required=True)
    ls.add_argument("--trials", type=int, default=5)
    ls.add_argument("--seed", type=int, default=0)
    return parser


def _config(args) -> dict:
    cfg = {"subcommand": args.command}
    for k, v in sorted(vars(args).items()):
        if k in ("command", "out", "threads"):
            continue
        cfg[k] = list(v) if isinstance(v, tuple) else v
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        threads = resolve_threads(args.threads)
        rows, summary, ok = COMMANDS[args.command](args, threads)
        write_output(render(rows, _config(args), args.format, summary), args.out)
    except (UsageError, DomainError) as exc:
        print(f"symsieve: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ArithmeticError, ConvergenceError, FloatingPointError) as exc:
        print(f"symsieve: failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if not ok:
        print(f"symsieve: verification failed: {summary}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
