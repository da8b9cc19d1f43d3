#!/usr/bin/env python3
"""Benchmark the compiled simulation kernel against the pure-Python fallback.

Both kernels implement identical semantics (the test suite asserts exact
agreement); this script measures the speed difference on a grid of instance
sizes and thread counts. Usage:

    python3 bench/benchmark_engines.py [--repeats 3] [--csv out.csv]
"""
from __future__ import annotations

import argparse
import sys
import time

from mslab import engine
from mslab.fabricate import FabricationConfig, fabricate
from mslab.potential import PotentialKind
from mslab.simulate import SimulationConfig, pack_oracle, run

CASES = [
    # (nodes, degree, multiplicity, alpha, threads)
    (3, 100, 2, 1.0, 1),
    (3, 100, 2, 0.7, 8),
    (5, 1000, 1, 1.0, 8),
    (5, 1000, 1, 1.0, 128),
    (4, 2000, 2, 0.9, 32),
    (5, 10000, 1, 1.0, 128),
]


def time_engine(packed, config: SimulationConfig, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        run(packed, config)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats per case (best is reported)")
    parser.add_argument("--csv", default=None, help="also write rows as CSV")
    args = parser.parse_args(argv)

    try:
        engine.get_kernel("compiled")
    except RuntimeError:
        print("compiled engine is not built; nothing to compare", file=sys.stderr)
        return 1

    rows = []
    header = (f"{'N':>3} {'d':>6} {'m':>2} {'alpha':>5} {'threads':>7} "
              f"{'python (s)':>11} {'compiled (s)':>13} {'speedup':>8}")
    print(header)
    print("-" * len(header))
    for nodes, d, m, alpha, threads in CASES:
        oracle = fabricate(FabricationConfig(nodes=nodes, degree=d,
                                             multiplicity=m, alpha=alpha,
                                             seed=0))
        packed = pack_oracle(oracle)
        times = {}
        for eng in ("python", "compiled"):
            cfg = SimulationConfig(threads=threads,
                                   potential=PotentialKind("greedy"),
                                   engine=eng)
            times[eng] = time_engine(packed, cfg, args.repeats)
        speedup = times["python"] / times["compiled"]
        print(f"{nodes:>3} {d:>6} {m:>2} {alpha:>5.2f} {threads:>7} "
              f"{times['python']:>11.4f} {times['compiled']:>13.4f} "
              f"{speedup:>7.1f}x")
        rows.append({"N": nodes, "d": d, "m": m, "alpha": alpha,
                     "threads": threads, "python_s": times["python"],
                     "compiled_s": times["compiled"], "speedup": speedup})
    if args.csv:
        from mslab.experiments import write_csv
        write_csv(args.csv, rows)
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
