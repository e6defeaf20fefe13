"""Compare the numba and numpy realized-score kernels.

Usage::

    python benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]

Prints the best-of-``repeat`` wall time per kernel and path, the speedup,
and the max absolute difference between the two paths.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from elicitlab import kernels
from elicitlab.shapes import ShapeFunction


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(args.seed)
    n = args.n
    y = rng.standard_normal(n)
    x1 = -1.64 + 0.1 * rng.standard_normal(n)
    X2 = np.column_stack([x1, x1 - 0.4])
    X3 = np.column_stack([x1 - 0.5, x1, x1 - 0.9])
    zero, exp, atan = ShapeFunction("zero"), ShapeFunction("exp"), ShapeFunction("atan")
    cases = {
        "pinball(atan)": (
            lambda: kernels.pinball_rows_numpy(x1, y, 0.05, atan),
            lambda: kernels.pinball_rows_numba(x1, y, 0.05, atan),
        ),
        "expectile": (
            lambda: kernels.expectile_rows_numpy(x1, y, 0.25),
            lambda: kernels.expectile_rows_numba(x1, y, 0.25),
        ),
        "var_es(zero, exp)": (
            lambda: kernels.spectral_rows_numpy(X2, y, [0.05], [1.0], (zero,), exp),
            lambda: kernels.spectral_rows_numba(X2, y, [0.05], [1.0], (zero,), exp),
        ),
        "spectral k=3 (atan, exp)": (
            lambda: kernels.spectral_rows_numpy(X3, y, [0.1, 0.3], [0.5, 0.5], (atan, atan), exp),
            lambda: kernels.spectral_rows_numba(X3, y, [0.1, 0.3], [0.5, 0.5], (atan, atan), exp),
        ),
    }
    print(f"n = {n}, best of {args.repeat}")
    print(f"{'kernel':<26}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}{'max |diff|':>12}")
    for name, (f_np, f_nb) in cases.items():
        f_nb()  # compile outside the timing loop
        t_np, a = best_time(f_np, args.repeat)
        t_nb, b = best_time(f_nb, args.repeat)
        print(f"{name:<26}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>9.2f}{np.max(np.abs(a - b)):>12.2e}")


if __name__ == "__main__":
    main()
