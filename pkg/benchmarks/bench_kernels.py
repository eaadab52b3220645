"""Time the numba and numpy backends of every float kernel and check they agree.

    python benchmarks/bench_kernels.py [--size N] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from polypreserve import _kernels as K
from polypreserve.semigroup import quadratic_delta


def _best(fn, repeat):
    fn()  # warm-up (numba compiles or loads its cache here)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(size: int):
    rng = np.random.default_rng(0)
    ts = np.linspace(0.01, 0.015, size // 10)
    k = np.arange(5)
    lam = np.exp(np.outer(ts, k**3))
    idx = np.add.outer(np.arange(3), np.arange(3))
    hankels = np.ascontiguousarray(lam[:, idx])
    t_grid = np.geomspace(1e-6, 100.0, size)
    delta = quadratic_delta(1.0)
    coeffs = rng.standard_normal(12)
    xs = np.linspace(-2, 2, size)
    return [
        ("min_eig_batch 3x3", lambda: K.min_eig_batch_numba(hankels), lambda: K.min_eig_batch_numpy(hankels)),
        ("quadratic_min", lambda: K.quadratic_min_numba(delta, t_grid), lambda: K.quadratic_min_numpy(delta, t_grid)),
        ("horner_grid deg 11", lambda: K.horner_grid_numba(coeffs, xs), lambda: K.horner_grid_numpy(coeffs, xs)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return 1
    print(f"{'kernel':<20} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8} {'max diff/scale':>15}")
    for name, fast, ref in cases(args.size):
        tn, a = _best(fast, args.repeat)
        tp, b = _best(ref, args.repeat)
        diff = float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))
        print(f"{name:<20} {1e3 * tn:>11.3f} {1e3 * tp:>11.3f} {tp / tn:>8.2f} {diff:>15.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
