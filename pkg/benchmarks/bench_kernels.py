"""Relaxation kernel timing: compiled extension versus pure fallback.

Runs the same seeded relaxation under both backends and reports wall
time and per-sweep throughput.  The fallback runs in a subprocess with
HODGEGEN_PURE_PYTHON=1 because the backend is picked once at import.

Usage: python3 benchmarks/bench_kernels.py [--n 150] [--avg-degree 6]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def measure(n, avg_degree, seed, epsilon):
    from hodgegen import kernels
    from hodgegen.complex import build_boundaries, build_laplacian
    from hodgegen.geomgraph import GeomConfig, generate
    from hodgegen.harmonic import HarmonicConfig, iterate_harmonic

    K = generate(GeomConfig(n=n, avg_degree=avg_degree, seed=seed))
    lap = build_laplacian(build_boundaries(K))
    t0 = time.perf_counter()
    result = iterate_harmonic(lap, HarmonicConfig(epsilon=epsilon, seed=seed))
    elapsed = time.perf_counter() - t0
    return {
        "backend": kernels.BACKEND,
        "edges": K.edge_count,
        "iterations": result.iterations,
        "seconds": elapsed,
    }


def main():
    parser = argparse.ArgumentParser(
        description="time the relaxation kernels under both backends")
    parser.add_argument("--n", type=int, default=150)
    parser.add_argument("--avg-degree", type=float, default=6.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--epsilon", type=float, default=1e-6)
    parser.add_argument("--json", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    stats = measure(args.n, args.avg_degree, args.seed, args.epsilon)
    if args.json:
        print(json.dumps(stats))
        return

    env = dict(os.environ, HODGEGEN_PURE_PYTHON="1")
    fallback = json.loads(subprocess.run(
        [sys.executable, __file__, "--n", str(args.n),
         "--avg-degree", str(args.avg_degree), "--seed", str(args.seed),
         "--epsilon", str(args.epsilon), "--json"],
        check=True, capture_output=True, text=True, env=env,
    ).stdout)

    print(f"{'backend':<10} {'edges':>6} {'iterations':>10} "
          f"{'seconds':>9} {'sweeps/s':>10}")
    for row in (stats, fallback):
        rate = row["iterations"] / row["seconds"]
        print(f"{row['backend']:<10} {row['edges']:>6} "
              f"{row['iterations']:>10} {row['seconds']:>9.3f} {rate:>10.0f}")
    if stats["backend"] != fallback["backend"]:
        print(f"speedup: {fallback['seconds'] / stats['seconds']:.1f}x "
              f"({stats['backend']} over {fallback['backend']})")


if __name__ == "__main__":
    main()
