#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--steps N]

Times the three hot loops (single quadratic-map trace, two-coupling flow
trace, perturbed ensemble chunk) on every available backend and prints the
speedup of the compiled extension when both are importable.
"""

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hubbardll._kernels import available_backends, load_backend  # noqa: E402


def time_call(fn, *args, repeat=3):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_g1_flow(impl, n):
    a_seq = np.full(n, 0.2548, dtype=complex)
    g = np.empty(n + 1, dtype=complex)
    gt = np.empty(n + 1, dtype=complex)
    A = np.empty(n + 1, dtype=complex)
    return time_call(impl.g1_flow, 0.01 + 0j, a_seq, 0.0, g, gt, A)


def bench_hubbard_flow(impl, n):
    a_seq = np.full(n, 0.2548)
    g1 = np.empty(n + 1)
    g2 = np.empty(n + 1)
    return time_call(impl.hubbard_flow, 0.02, 0.02, a_seq, 0.1274, 0.0, g1, g2)


def bench_ensemble(impl, n, batch=200, chunk=2048):
    rng = np.random.default_rng(0)
    g0 = 0.005 * np.exp(1j * rng.uniform(-2.3, 2.3, batch))
    sigma = 0.002 * np.exp(1j * rng.uniform(0, 2 * math.pi, (chunk, batch)))

    def run():
        g = g0.copy()
        suma = np.zeros(batch, dtype=complex)
        margins = np.zeros((5, batch))
        margins[0].fill(-np.inf)
        for _ in range(max(1, n // chunk)):
            impl.ensemble_chunk(g, suma, g0, sigma, 0.22, margins)

    return time_call(run)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--steps", type=int, default=1_000_000,
                        help="flow length (ensemble uses steps/10 x 200 samples)")
    args = parser.parse_args()

    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    cases = [
        ("g1 quadratic-map trace", bench_g1_flow, args.steps),
        ("hubbard two-coupling trace", bench_hubbard_flow, args.steps),
        ("ensemble 200 x steps/10", bench_ensemble, args.steps // 10),
    ]
    results = {}
    for label, fn, n in cases:
        for name in backends:
            results[(label, name)] = fn(load_backend(name), n)

    width = max(len(c[0]) for c in cases)
    header = f"{'kernel':<{width}}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, _, n in cases:
        row = f"{label:<{width}}  "
        for name in backends:
            row += f"{results[(label, name)] * 1e3:>10.1f}ms"
        if len(backends) == 2:
            row += f"{results[(label, 'python')] / results[(label, 'compiled')]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
