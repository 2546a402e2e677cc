#!/usr/bin/env python3
"""Benchmark the native selection-probability kernel against the pure one.

Two workloads:
  kernel    direct plex_groups calls on synthetic pools of varying size
  model     end-to-end stochastic-model steps (the production hot path)

Run:  python benchmarks/bench_plex.py [--repeats N]
"""

import argparse
import time

import numpy as np

from lexiscape import kernels
from lexiscape.kernels import _plex_pure


def synthetic_pool(rng, n, dims):
    seen = set()
    rows = []
    while len(rows) < n:
        row = tuple(int(v) for v in rng.integers(-8, 9, size=dims))
        if row not in seen:
            seen.add(row)
            rows.append(row)
    scores = np.array(rows, dtype=np.int64)
    mults = np.ones(n, dtype=np.int64)
    return scores, mults


def time_call(fn, *args, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernel(repeats):
    if not kernels.HAVE_NATIVE:
        print("native kernel not built; kernel comparison skipped")
        return
    from lexiscape.kernels import _plex_native

    rng = np.random.default_rng(0)
    print(f"{'pool':>6} {'dims':>5} {'eps':>4} {'pure':>12} {'native':>12} {'speedup':>8}")
    for n in (6, 12, 24, 48):
        for dims in (5, 10):
            for eps_value in (0.0, 1.0):
                scores, mults = synthetic_pool(rng, n, dims)
                eps = np.full(dims, eps_value)
                calls = max(1, 2000 // n)

                def run_many(impl):
                    def inner():
                        for _ in range(calls):
                            impl.plex_groups(scores, mults, eps)
                    return inner

                pure_t = time_call(run_many(_plex_pure), repeats=repeats) / calls
                native_t = time_call(run_many(_plex_native), repeats=repeats) / calls
                print(
                    f"{n:>6} {dims:>5} {eps_value:>4.1f} "
                    f"{pure_t * 1e6:>10.1f}us {native_t * 1e6:>10.1f}us "
                    f"{pure_t / native_t:>7.1f}x"
                )


def bench_model_steps(repeats):
    import os
    import subprocess
    import sys
    import textwrap

    snippet = textwrap.dedent(
        """
        import time
        import numpy as np
        from lexiscape import kernels
        from lexiscape.model import ModelParams, run
        params = ModelParams(population_size=30, dims=5, value_limit=10,
                             generations=50, mutation_rate=0.1, threshold=0.5,
                             max_steps=2000, seed=123)
        start = time.perf_counter()
        outcome = run(params, stop_on_hit=False)
        elapsed = time.perf_counter() - start
        print(f"{kernels.active_backend()}: {outcome.steps_run} steps "
              f"in {elapsed:.2f}s ({elapsed / outcome.steps_run * 1e3:.3f} ms/step)")
        """
    )
    reach_snippet = textwrap.dedent(
        """
        import time
        from lexiscape import kernels
        from lexiscape.model import ModelParams
        from lexiscape.reachability import ReachState, explore
        from lexiscape.selection import EpsilonPolicy
        params = ModelParams(population_size=30, dims=5, value_limit=10,
                             generations=50, mutation_rate=0.0, threshold=0.5,
                             max_steps=1,
                             epsilon_policy=EpsilonPolicy(value=2.0))
        start = time.perf_counter()
        graph = explore(ReachState.of([(0,) * 5]), params, 500)
        elapsed = time.perf_counter() - start
        print(f"{kernels.active_backend()}: {graph.budget_used} expansions "
              f"in {elapsed:.2f}s")
        """
    )

    def compare(label, code):
        print(f"\n{label}:")
        for force_pure in (False, True):
            env = dict(os.environ)
            if force_pure:
                env["LEXISCAPE_NO_NATIVE"] = "1"
            else:
                env.pop("LEXISCAPE_NO_NATIVE", None)
            best = None
            for _ in range(repeats):
                out = subprocess.run(
                    [sys.executable, "-c", code], env=env,
                    capture_output=True, text=True, check=True,
                ).stdout.strip()
                best = out  # workloads are deterministic
            print(" ", best)

    # The model caches repeated population states, so this understates
    # the kernel gap; the reachability workload below is cache-miss heavy.
    compare("model workload (2000 steps, feasible desk configuration)", snippet)
    compare("reachability workload (eps=2, 500 expansions)", reach_snippet)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    print(f"active backend: {kernels.active_backend()}")
    bench_kernel(args.repeats)
    bench_model_steps(args.repeats)


if __name__ == "__main__":
    main()
