#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 256,512,1024] [--repeat 5]
"""

import argparse
import time

import numpy as np

from bellband.kernels import _fallback

try:
    from bellband.kernels import _core
except ImportError:
    _core = None

D_COEFF = -2.5026e-10
B_COEFF = -1.0135e6
LENGTH = 0.5e-3


def best_of(repeat, fn, *args):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_map(impl, n, repeat):
    theta = np.linspace(-0.008, 0.008, n)
    omega = np.linspace(-3e13, 3e13, n)
    return best_of(repeat, impl.amplitude_map_typeii, theta, omega,
                   D_COEFF, B_COEFF, LENGTH, 0.0)


def bench_contours(impl, n, repeat):
    theta = np.linspace(-0.008, 0.008, n)
    omega = np.linspace(-3e13, 3e13, n)
    _, raw = _fallback.amplitude_map_typeii(theta, omega, D_COEFF, B_COEFF, LENGTH, 0.0)
    raw = np.ascontiguousarray(raw)
    return best_of(repeat, impl.contour_segments, theta, omega, raw, np.pi)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="256,512,1024")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _core is None:
        print("compiled kernels not available; showing fallback only")

    header = f"{'kernel':<14}{'grid':>8}{'python':>12}{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, bench in (("amplitude map", bench_map), ("contours", bench_contours)):
        for n in sizes:
            t_py = bench(_fallback, n, args.repeat)
            if _core is not None:
                t_c = bench(_core, n, args.repeat)
                print(f"{name:<14}{n:>6}^2{t_py * 1e3:>10.2f}ms{t_c * 1e3:>10.2f}ms"
                      f"{t_py / t_c:>9.1f}x")
            else:
                print(f"{name:<14}{n:>6}^2{t_py * 1e3:>10.2f}ms{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
