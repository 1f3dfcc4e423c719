#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the numpy fallback.

Times the four hot kernels on realistic workloads (a 512x512 frame for the
pixel kernels, a 2000-shade catalog block for CIEDE2000) and prints the
per-call medians plus speedups. Run after building the extension:

    python benchmarks/bench_backends.py [--repeats N] [--frame-size N]
"""

import argparse
import statistics
import time

import numpy as np

from lumishade.backends import reference

try:
    from lumishade.backends import _core as native
except ImportError:
    native = None


def median_ms(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append((time.perf_counter() - start) * 1000.0)
    return statistics.median(times)


def build_workloads(frame_size):
    rng = np.random.default_rng(0)
    n = frame_size * frame_size
    linear = rng.random((n, 3))
    normals = rng.normal(size=(n, 3))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    coeffs = rng.normal(size=9)
    catalog = np.column_stack(
        [rng.uniform(0, 100, 2000), rng.uniform(-60, 60, 2000), rng.uniform(-60, 60, 2000)]
    )
    estimates = np.column_stack(
        [rng.uniform(0, 100, 50), rng.uniform(-60, 60, 50), rng.uniform(-60, 60, 50)]
    )
    return [
        (f"srgb_encode        ({frame_size}x{frame_size} px)",
         lambda k: k.srgb_encode(linear)),
        (f"lab_from_linear    ({frame_size}x{frame_size} px)",
         lambda k: k.lab_from_linear(linear)),
        (f"sh_shade           ({frame_size}x{frame_size} px)",
         lambda k: k.sh_shade(normals, coeffs)),
        ("ciede2000_cross    (50 x 2000 block)",
         lambda k: k.ciede2000_cross(estimates, catalog)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=9)
    parser.add_argument("--frame-size", type=int, default=512)
    args = parser.parse_args()

    workloads = build_workloads(args.frame_size)

    if native is None:
        print("compiled core not built: timing the numpy fallback only\n")

    header = f"{'kernel':<42} {'numpy ms':>10}"
    if native is not None:
        header += f" {'native ms':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, call in workloads:
        numpy_ms = median_ms(lambda: call(reference), args.repeats)
        line = f"{name:<42} {numpy_ms:>10.2f}"
        if native is not None:
            native_ms = median_ms(lambda: call(native), args.repeats)
            line += f" {native_ms:>10.2f} {numpy_ms / native_ms:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
