#!/usr/bin/env python3
"""Benchmark the jitted filter kernels against the pure-numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--repeats 5]

The same workloads run through wqpe._fkernels_numba and
wqpe._fkernels_numpy; results are wall-clock medians.  WQPE_PURE_NUMPY
only affects the package-level dispatch, not this script (both paths are
imported explicitly).
"""

import argparse
import time

import numpy as np

from wqpe import _fkernels_numpy as knp

try:
    from wqpe import _fkernels_numba as knb
except ImportError:
    knb = None


def median_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return sorted(times)[len(times) // 2]


def workloads():
    qs = np.ascontiguousarray(np.random.default_rng(3).uniform(-512, 512, size=200_000))
    deltas = np.linspace(-0.5, 0.5, 101)
    return [
        ("cosine_filter, 2e5 points, m=10", lambda k: k.cosine_filter(qs, 10)),
        ("cosine_plus_filter, 2e5 points, m=10", lambda k: k.cosine_plus_filter(qs, 10)),
        ("rect_filter, 2e5 points, m=10", lambda k: k.rect_filter(qs, 10)),
        (
            "error_tail_sum, 101 deltas, m=18 k=128",
            lambda k: [k.error_tail_sum(float(d), 18, 128, 1) for d in deltas],
        ),
        ("cbar_quadrature, m=8, 4096 nodes", lambda k: k.cbar_quadrature(8, 1, 4096)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if knb is None:
        print("numba unavailable; nothing to compare")
        return

    print(f"{'workload':45s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, work in workloads():
        work(knb)  # JIT warmup
        t_nb = median_time(lambda: work(knb), args.repeats)
        t_np = median_time(lambda: work(knp), args.repeats)
        print(f"{name:45s} {t_nb * 1e3:9.2f}ms {t_np * 1e3:9.2f}ms {t_np / t_nb:7.2f}x")


if __name__ == "__main__":
    main()
