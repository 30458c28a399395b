#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallback.

Runs the standard 50 s closed-loop scenarios on both backends, reports wall
time per run and the worst trajectory disagreement.

Usage:
    python benchmarks/bench_backends.py [--runs N] [--poles 1,6]
"""

import argparse
import time

import numpy as np

from fuzzpole import kernels
from fuzzpole.harness import default_scenario, run


def time_backend(scenario, backend, runs):
    best = float("inf")
    traj = None
    for _ in range(runs):
        start = time.perf_counter()
        traj = run(scenario, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best, traj


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=5, help="repeats per cell (best-of)")
    parser.add_argument("--poles", default="1,6", help="comma list of pole presets")
    args = parser.parse_args()

    if "numba" not in kernels.BACKENDS:
        print("numba backend unavailable (FUZZPOLE_NUMBA=0 or numba missing); "
              "nothing to compare")
        return

    print("warming up jit kernels...")
    kernels.warmup()

    poles = [int(p) for p in args.poles.split(",")]
    scenarios = [
        default_scenario(pole, ctrl) for pole in poles for ctrl in ("fc", "sfc")
    ]
    header = f"{'scenario':14s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s} {'max traj diff':>14s}"
    print(header)
    print("-" * len(header))
    for scenario in scenarios:
        t_nb, traj_nb = time_backend(scenario, "numba", args.runs)
        t_np, traj_np = time_backend(scenario, "numpy", args.runs)
        n = min(traj_nb.data.shape[0], traj_np.data.shape[0])
        diff = float(np.max(np.abs(traj_nb.data[:n] - traj_np.data[:n])))
        print(
            f"{scenario.name:14s} {t_nb * 1e3:8.2f}ms {t_np * 1e3:8.2f}ms "
            f"{t_np / t_nb:7.1f}x {diff:14.3e}"
        )


if __name__ == "__main__":
    main()
