"""Timing comparison of the compiled and plain-numpy kernel paths.

Each backend runs in a fresh subprocess because the flag is read at
import time. Usage:

    python3 benchmarks/bench_backends.py
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = ("hop_distances", "bessel_orders", "quantum_block")
REPEATS = 3


def _build_inputs():
    import numpy as np

    from ctwalk.graphs import build_dual_sierpinski
    from ctwalk.spectral import laplacian_eigensystem

    big = build_dual_sierpinski(6)          # N = 729, stresses the BFS
    mid = build_dual_sierpinski(5)          # N = 243
    eig = laplacian_eigensystem(mid.laplacian())
    times = np.linspace(0.0, 20.0, 400)
    return {
        "hop_distances": lambda: _hop(big),
        "bessel_orders": lambda: _bessel(),
        "quantum_block": lambda: _block(eig, times),
    }


def _hop(graph):
    from ctwalk._kernels import hop_distances

    return hop_distances(graph.adjacency)


def _bessel():
    from ctwalk._kernels import bessel_orders

    total = 0.0
    for z in (0.5, 7.0, 40.0, 160.0, 640.0):
        total += bessel_orders(800, z, 1e-12).sum()
    return total


def _block(eig, times):
    from ctwalk._kernels import quantum_block

    return quantum_block(eig.vectors, eig.values, times, 1.0)


def run_worker():
    from ctwalk._backend import backend_name

    inputs = _build_inputs()
    results = {"backend": backend_name()}
    for name in WORKLOADS:
        fn = inputs[name]
        fn()                                # warm-up; compiles under numba
        best = min(_timed(fn) for _ in range(REPEATS))
        results[name] = best
    print(json.dumps(results))


def _timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def run_backend(backend):
    env = dict(os.environ, CTWALK_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker"],
        env=env, capture_output=True, text=True,
    )
    if proc.returncode != 0:
        raise RuntimeError(f"{backend} worker failed:\n{proc.stderr}")
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", action="store_true",
                        help="internal: time the current backend and exit")
    args = parser.parse_args()
    if args.worker:
        run_worker()
        return

    rows = [run_backend(b) for b in ("numpy", "numba")]
    if rows[1]["backend"] != "numba":
        print("numba unavailable; plain path only")
    width = max(len(w) for w in WORKLOADS)
    header = f"{'kernel':<{width}}  " + "".join(
        f"{r['backend']:>12}" for r in rows
    )
    print(header)
    print("-" * len(header))
    for name in WORKLOADS:
        cells = "".join(f"{r[name]:>12.4f}" for r in rows)
        ratio = rows[0][name] / rows[1][name] if rows[1][name] else float("inf")
        print(f"{name:<{width}}  {cells}   x{ratio:.1f}")
    print("\nbest of 3 runs, seconds; warm-up excluded")


if __name__ == "__main__":
    main()
