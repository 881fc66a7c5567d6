#!/usr/bin/env python3
"""Benchmark: compiled extension vs pure numpy fallback on the hot kernels.

Run:  python benchmarks/bench_kernels.py [--samples 20000] [--stream 1000000]
"""
import argparse
import time

import numpy as np

from pigeonstats import _pure
from pigeonstats.lattice import sample_lattice_batch

try:
    from pigeonstats import _ext
except ImportError:
    _ext = None


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=20000)
    ap.add_argument("--stream", type=int, default=10**6)
    args = ap.parse_args()

    rng = np.random.default_rng(1)
    B, T = sample_lattice_batch(rng, args.samples)
    lo = np.array([0.0])
    hi = np.array([1.0])
    flags = np.ones(1, dtype=np.uint8)
    strips_lo = np.array([0.0, 4.0, 5.0])
    strips_hi = np.array([4.0, 5.0, 9.0])
    closed = np.array([1, 1, 1], dtype=np.uint8)
    opened = np.array([0, 0, 0], dtype=np.uint8)

    cases = [
        (f"triangle counts, {args.samples} lattices",
         lambda impl: impl.cone_range_counts(B, T, lo, hi, flags, flags)),
        (f"3-strip counts, {args.samples} lattices",
         lambda impl: impl.cone_range_counts(B, T, strips_lo, strips_hi, closed, opened)),
        (f"perturbed-triangle counts, {args.samples} lattices",
         lambda impl: impl.approx_counts(B, T, 0.01, -0.001, 1.0)),
        (f"sqrt bucket histogram, n <= {args.stream}",
         lambda impl: impl.powq_bucket_counts(args.stream, 0, args.stream, 1, 2, False)),
        (f"cbrt bucket histogram, n <= {args.stream}",
         lambda impl: impl.powq_bucket_counts(args.stream, 0, args.stream, 1, 3, False)),
    ]

    print(f"{'kernel':<45} {'pure':>10} {'ext':>10} {'speedup':>9}")
    for name, fn in cases:
        t_pure = timeit(lambda: fn(_pure))
        if _ext is None:
            print(f"{name:<45} {t_pure:>9.3f}s {'n/a':>10} {'':>9}")
            continue
        a = fn(_ext)
        b = fn(_pure)
        assert np.array_equal(np.asarray(a), np.asarray(b)), f"backend mismatch in {name}"
        t_ext = timeit(lambda: fn(_ext))
        print(f"{name:<45} {t_pure:>9.3f}s {t_ext:>9.3f}s {t_pure / t_ext:>8.1f}x")


if __name__ == "__main__":
    main()
