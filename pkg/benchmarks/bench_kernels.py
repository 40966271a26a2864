#!/usr/bin/env python3
"""Benchmark the compiled dice kernel against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--draws N]

Also times whole-match throughput as the end-to-end reference point.
"""

from __future__ import annotations

import argparse
import time

from perihack import _resolution_py as pure

try:
    from perihack import _resolution as compiled
except ImportError:
    compiled = None

from perihack.agents import descriptor
from perihack.catalog import default_catalog
from perihack.engine import GameConfig
from perihack.sim import run_batch


def bench(label, fn, repeats=3):
    best = min(_timed(fn) for _ in range(repeats))
    print(f"  {label:<34}{best * 1000:>10.2f} ms")
    return best


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--draws", type=int, default=2_000_000)
    parser.add_argument("--grid", type=int, default=200)
    parser.add_argument("--matches", type=int, default=500)
    args = parser.parse_args()

    backends = [("python", pure)]
    if compiled is not None:
        backends.append(("compiled", compiled))
    else:
        print("compiled kernel not built; showing the fallback only")

    print(f"monte-carlo resolutions ({args.draws:,} d20 draws)")
    times = {}
    for name, mod in backends:
        times[name] = bench(
            name, lambda m=mod: m.simulate_successes(3, 2, 0, args.draws, 42)
        )
    _speedup(times)

    print(f"probability grid ({args.grid}x{args.grid} cells)")
    times = {}
    for name, mod in backends:
        times[name] = bench(
            name, lambda m=mod: m.probability_grid(-args.grid // 2, args.grid // 2)
        )
    _speedup(times)

    if compiled is not None:
        hits_a = pure.simulate_successes(3, 2, 0, 100_000, 7)
        hits_b = compiled.simulate_successes(3, 2, 0, 100_000, 7)
        print(f"parity check: {hits_a} == {hits_b} -> {'ok' if hits_a == hits_b else 'MISMATCH'}")

    print(f"\nend-to-end reference: {args.matches} greedy-vs-budget matches")
    catalog = default_catalog()
    t0 = time.perf_counter()
    run_batch(
        args.matches,
        catalog,
        GameConfig(),
        descriptor("greedy-red"),
        descriptor("budget-blue"),
        base_seed=0,
    )
    dt = time.perf_counter() - t0
    print(f"  batch                             {dt * 1000:>10.2f} ms"
          f"  ({dt / args.matches * 1000:.2f} ms/match)")


def _speedup(times: dict) -> None:
    if "compiled" in times and "python" in times and times["compiled"] > 0:
        print(f"  -> compiled is {times['python'] / times['compiled']:.0f}x faster\n")
    else:
        print()


if __name__ == "__main__":
    main()
