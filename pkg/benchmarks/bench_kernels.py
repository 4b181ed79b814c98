"""Time the compiled kernels against the pure-Python (numpy) fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

Each row reports the best of ``--repeat`` runs per backend and the speedup.
Both backends are imported directly, so the ``PLLI_PURE_PYTHON`` switch does
not matter here.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from plli import _kernels_py as py

try:
    from plli import _kernels as cy
except ImportError:  # extension not built
    cy = None


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(scale):
    rng = np.random.default_rng(0)
    n_prefix = int(2000 * scale)
    y = np.sort(rng.normal(size=n_prefix))
    y = y - y.mean()
    S = py.compensated_cumsum(y)
    S2 = py.compensated_cumsum(y * y)
    n_dc = int(100_000 * scale)
    yd = np.sort(rng.normal(size=n_dc))
    yd = yd - yd.mean()
    Sd, S2d = py.compensated_cumsum(yd), py.compensated_cumsum(yd * yd)
    n_lin = int(300 * scale)
    X = rng.normal(size=(n_lin, 3))
    yl = np.sort((X.sum(axis=1)) ** 2)
    G = py.linear_cost_matrix(X, yl, 1e-8)
    return [
        (f"compensated_cumsum n={n_dc}", lambda k: k.compensated_cumsum(yd)),
        (f"dp_prefix n={n_prefix} H=4", lambda k: k.dp_prefix(S, S2, y, 4, py.SQUARED, 1)),
        (f"dp_prefix absolute n={n_prefix} H=4", lambda k: k.dp_prefix(S, S2, y, 4, py.ABSOLUTE, 1)),
        (f"dc_prefix n={n_dc} K=8", lambda k: k.dc_prefix(Sd, S2d, yd, 8, py.SQUARED)),
        (f"linear_cost_matrix n={n_lin} d=3", lambda k: k.linear_cost_matrix(X, yl, 1e-8)),
        (f"dp_dense n={n_lin} H=4", lambda k: k.dp_dense(G, 4, 1, True)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0, help="Multiply every problem size.")
    args = ap.parse_args(argv)
    print(f"{'kernel':<40} {'python [s]':>11} {'compiled [s]':>13} {'speedup':>8}")
    for name, run in _cases(args.scale):
        t_py = _best(lambda: run(py), args.repeat)
        if cy is None:
            print(f"{name:<40} {t_py:>11.4f} {'n/a':>13} {'n/a':>8}")
            continue
        t_cy = _best(lambda: run(cy), args.repeat)
        print(f"{name:<40} {t_py:>11.4f} {t_cy:>13.4f} {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
