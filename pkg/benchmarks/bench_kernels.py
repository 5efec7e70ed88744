"""Timing comparison of the numba and numpy kernel backends.

Runs the fused episode loops and the sequence scan on both backends and
prints a table of best-of-N wall times with the speedup ratio. The first
numba call per kernel is excluded by a warm-up pass so compilation cost
does not pollute the numbers.

Usage:
    python3 benchmarks/bench_kernels.py [--horizon N] [--runs N] [--repeats N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from graphbandits import BanditInstance, disjoint_cliques
from graphbandits.kernels import HAVE_NUMBA, run_episode_arrays, scan_sequences_range


def best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_episode(policy, instance, horizon, runs, backend, repeats):
    means = instance.means
    adj = instance.graph.adjacency_matrix()

    def task():
        for run in range(runs):
            gen = np.random.default_rng([1234, run])
            run_episode_arrays(
                policy, means, adj, horizon, gen, bonus=5.0, backend=backend
            )

    task()  # warm-up (numba compilation, cache effects)
    return best_of(repeats, task)


def bench_scan(alpha, phases, backend, repeats):
    total = (alpha + 1) ** phases
    threshold = float(np.log2(alpha)) + 3.0

    def task():
        scan_sequences_range(alpha, phases, 0, total, threshold, 1e-9, backend=backend)

    task()
    return best_of(repeats, task)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--horizon", type=int, default=20_000)
    parser.add_argument("--runs", type=int, default=20, help="episodes per timing")
    parser.add_argument("--repeats", type=int, default=3, help="timings; best wins")
    parser.add_argument("--alpha", type=int, default=6, help="scan independence cap")
    parser.add_argument("--phases", type=int, default=8, help="scan band count")
    args = parser.parse_args()

    if not HAVE_NUMBA:
        print("numba is not importable; nothing to compare")
        return 1

    means = np.append([0.9], np.full(9, 0.6))
    instance = BanditInstance(means, disjoint_cliques((5, 5)))

    rows = []
    for policy in ("ucb-n", "ucb1", "ts-n"):
        label = f"episode {policy} (T={args.horizon}, {args.runs} runs)"
        t_numba = bench_episode(
            policy, instance, args.horizon, args.runs, "numba", args.repeats
        )
        t_numpy = bench_episode(
            policy, instance, args.horizon, args.runs, "numpy", args.repeats
        )
        rows.append((label, t_numba, t_numpy))

    label = f"scan alpha={args.alpha} phases={args.phases}"
    t_numba = bench_scan(args.alpha, args.phases, "numba", args.repeats)
    t_numpy = bench_scan(args.alpha, args.phases, "numpy", args.repeats)
    rows.append((label, t_numba, t_numpy))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for label, t_numba, t_numpy in rows:
        print(
            f"{label:<{width}}  {t_numba * 1e3:>8.1f}ms  {t_numpy * 1e3:>8.1f}ms  "
            f"{t_numpy / t_numba:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
