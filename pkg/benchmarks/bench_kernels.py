#!/usr/bin/env python3
"""Compare the compiled kernels against the NumPy fallback.

The audit commands call the distortion kernel hundreds of thousands of
times on short vectors, so per-call overhead is what matters; this times
exactly that call pattern plus the mirror-ascent solver.

Usage:
    python benchmarks/bench_kernels.py [--calls 200000] [--states 6]
"""

import argparse
import time

import numpy as np

from probdistort import _kernels_py

try:
    from probdistort import _ckernels
except ImportError:
    _ckernels = None


def time_power_apply(impl, calls, n, rng):
    w = rng.exponential(size=n) + 0.1
    lw = np.log(w / w.sum())
    ps = rng.exponential(size=(256, n))
    ps /= ps.sum(axis=1, keepdims=True)
    start = time.perf_counter()
    for i in range(calls):
        impl.power_apply(lw, 1.7, ps[i % 256])
    return time.perf_counter() - start


def time_mirror_ascent(impl, solves, n, rng):
    problems = []
    for _ in range(64):
        u = rng.normal(size=n)
        prior = rng.exponential(size=n)
        prior /= prior.sum()
        problems.append((u, float(rng.uniform(0.2, 4.0)), float(rng.uniform(0.3, 2.5)), prior))
    start = time.perf_counter()
    for i in range(solves):
        u, scale, power, prior = problems[i % 64]
        impl.mirror_ascent(u, scale, power, prior, 500, 1e-10)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--calls", type=int, default=200_000, help="power_apply calls")
    parser.add_argument("--solves", type=int, default=2_000, help="mirror_ascent solves")
    parser.add_argument("--states", type=int, default=6)
    args = parser.parse_args()

    impls = [("python", _kernels_py)]
    if _ckernels is not None:
        impls.append(("compiled", _ckernels))
    else:
        print("compiled kernels unavailable; timing the fallback only\n")

    rows = []
    for name, impl in impls:
        rng = np.random.default_rng(0)
        t_apply = time_power_apply(impl, args.calls, args.states, rng)
        t_solve = time_mirror_ascent(impl, args.solves, args.states, rng)
        rows.append((name, t_apply, t_solve))

    print(f"{args.calls} power_apply calls and {args.solves} mirror_ascent solves, "
          f"{args.states} states\n")
    print(f"{'impl':<10} {'power_apply':>14} {'mirror_ascent':>14}")
    for name, t_apply, t_solve in rows:
        print(f"{name:<10} {t_apply:>12.3f} s {t_solve:>12.3f} s")
    if len(rows) == 2:
        print(f"\nspeedup: power_apply x{rows[0][1] / rows[1][1]:.1f}, "
              f"mirror_ascent x{rows[0][2] / rows[1][2]:.1f}")


if __name__ == "__main__":
    main()
