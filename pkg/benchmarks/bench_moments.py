"""Benchmark the compiled moment kernel against the pure-NumPy fallback.

Run with the default backend, then again with BITORUS_NO_NUMBA=1, or just run
this script: it times both code paths directly.

    python3 benchmarks/bench_moments.py [n_atoms] [n_moments]
"""
from __future__ import annotations

import sys
import time

import numpy as np

from bitorus import _kernels


def bench(fn, thetas, weights, ps, repeats=3):
    fn(thetas, weights, ps[0])  # warm-up (triggers JIT compilation)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        acc = 0.0 + 0.0j
        for p in ps:
            acc += fn(thetas, weights, p)
        best = min(best, time.perf_counter() - t0)
    return best, acc


def main() -> None:
    n_atoms = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    n_moments = int(sys.argv[2]) if len(sys.argv) > 2 else 50
    rng = np.random.default_rng(12345)
    thetas = rng.uniform(-np.pi, np.pi, size=(n_atoms, 2))
    weights = rng.uniform(0.0, 1.0, size=n_atoms)
    weights /= weights.sum()
    ps = [
        np.array([p1, p2], dtype=np.float64)
        for p1 in range(-n_moments // 2, n_moments // 2)
        for p2 in (1, 2)
    ]

    t_py, acc_py = bench(_kernels._atomic_moment_sum_py, thetas, weights, ps)
    print(f"numpy fallback : {t_py:8.4f} s  ({n_atoms} atoms x {len(ps)} moments)")

    if _kernels.BACKEND == "numba":
        t_nb, acc_nb = bench(_kernels._atomic_moment_sum_nb, thetas, weights, ps)
        print(f"numba kernel   : {t_nb:8.4f} s  ({n_atoms} atoms x {len(ps)} moments)")
        print(f"speedup        : {t_py / t_nb:8.2f}x")
        print(f"max difference : {abs(acc_py - acc_nb):.3e}")
    else:
        print("numba unavailable or disabled; only the fallback was timed")


if __name__ == "__main__":
    main()
