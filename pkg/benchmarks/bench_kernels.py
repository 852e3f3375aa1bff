"""Timing comparison of the compiled kernels against the numpy fallback.

Run as: python3 benchmarks/bench_kernels.py
"""
import time

import numpy as np

from timeoplab import kernels


def _time(fn, *args, repeats=7):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_fd_derivative(n=8192, width=3):
    rng = np.random.default_rng(0)
    values = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    interior = rng.standard_normal(2 * width + 1)
    edge_left = rng.standard_normal((width, 2 * width + 1))
    edge_right = rng.standard_normal((width, 2 * width + 1))
    args = (values, interior, edge_left, edge_right)
    return (
        _time(kernels.fd_derivative, *args),
        _time(kernels.fd_derivative_py, *args),
    )


def bench_phase_amplitudes(n=8192, m=256):
    rng = np.random.default_rng(1)
    coeffs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    energies = rng.uniform(0.0, 512.0, n)
    times = np.linspace(0.0, 50.0, m)
    args = (coeffs, energies, times)
    return (
        _time(kernels.phase_amplitudes, *args),
        _time(kernels.phase_amplitudes_py, *args),
    )


def main():
    print("active backend: %s" % kernels.BACKEND)
    if kernels.BACKEND != "compiled":
        print("compiled extension unavailable; both columns use the fallback")
    rows = [
        ("fd_derivative (N=8192)",) + bench_fd_derivative(),
        ("phase_amplitudes (8192x256)",) + bench_phase_amplitudes(),
    ]
    print("%-30s %12s %12s %8s" % ("kernel", "compiled [s]", "python [s]", "speedup"))
    for name, fast, slow in rows:
        print("%-30s %12.3e %12.3e %7.1fx" % (name, fast, slow, slow / fast))


if __name__ == "__main__":
    main()
