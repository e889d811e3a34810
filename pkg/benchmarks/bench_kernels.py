#!/usr/bin/env python
"""
Benchmark the first-hit search: numba kernel vs the pure-numpy fallback.

Both backends run on identical trajectories; the script checks the hitting
steps agree exactly before reporting timings.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --n 50000 --eps 1e-2 1e-3
    python benchmarks/bench_kernels.py --output bench.json
"""

import argparse
import json
import sys
import time

import numpy as np

from quasilorentz import pointsets as ps
from quasilorentz._accel import NUMBA_AVAILABLE
from quasilorentz.simulate import SimConfig, first_hits, sample_trajectory_params

FIELDS = {
    "fibonacci": ps.Fibonacci,
    "periodic": ps.matched_periodic,
    "poisson": lambda: ps.matched_poisson(seed=1),
}


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.strip().split("\n")[0])
    ap.add_argument("--n", type=int, default=20_000)
    ap.add_argument("--eps", type=float, nargs="+", default=[1e-2, 1e-3])
    ap.add_argument("--fields", nargs="+", choices=sorted(FIELDS), default=sorted(FIELDS))
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--output", help="write results as JSON")
    args = ap.parse_args(argv)

    if not NUMBA_AVAILABLE:
        print("numba unavailable or disabled; timing the numpy path only")

    rows = []
    print(f"{'field':>10} {'eps':>8} {'numba (s)':>10} {'numpy (s)':>10} {'speedup':>8}")
    print("-" * 52)
    for name in args.fields:
        fld = FIELDS[name]()
        for eps in args.eps:
            cfg = SimConfig(epsilon=eps, n_trajectories=args.n, seed=0)
            q0, v = sample_trajectory_params(cfg, np.arange(args.n))
            run = lambda backend: first_hits(fld, q0, v, eps, cfg.max_steps, backend=backend)
            t_np, k_np = timed(lambda: run("numpy"), 1)
            if NUMBA_AVAILABLE:
                run("numba")  # compile outside the timing
                t_nb, k_nb = timed(lambda: run("numba"), args.repeat)
                if not np.array_equal(k_nb, k_np):
                    print(f"backend mismatch for {name} eps={eps}", file=sys.stderr)
                    return 1
            else:
                t_nb = float("nan")
            rows.append({"field": name, "eps": eps, "n": args.n, "numba_s": t_nb, "numpy_s": t_np})
            print(f"{name:>10} {eps:>8.0e} {t_nb:>10.3f} {t_np:>10.3f} {t_np / t_nb:>7.1f}x")

    if args.output:
        with open(args.output, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
