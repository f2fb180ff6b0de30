"""Benchmark the compiled Chebyshev kernel against the numpy fallback.

The degree search spends almost all of its time evaluating long Chebyshev
series on dense grids; this script times that inner loop at representative
sizes and one full `min_degree` call per backend.

Usage: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from blockenc._kernels import KERNEL_BACKEND, chebyshev_values
from blockenc import sva


def time_call(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eval():
    print(f"compiled backend available: {KERNEL_BACKEND == 'cython'}")
    print(f"\n{'degree':>8} {'grid':>8} {'cython':>10} {'numpy':>10} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for degree, npts in [(500, 13_000), (2_000, 25_000), (8_000, 35_000), (17_000, 35_000)]:
        coeffs = rng.normal(size=degree + 1)
        xs = np.linspace(-1, 1, npts)
        rows = {}
        for backend in ("cython", "numpy"):
            if backend == "cython" and KERNEL_BACKEND != "cython":
                rows[backend] = float("nan")
                continue
            rows[backend] = time_call(lambda: chebyshev_values(coeffs, xs, backend=backend))
        speedup = rows["numpy"] / rows["cython"]
        print(f"{degree:>8} {npts:>8} {rows['cython']:>9.4f}s {rows['numpy']:>9.4f}s {speedup:>7.1f}x")


def bench_min_degree():
    point = (8.0, 0.159, 1e-3)
    print(f"\nmin_degree{point} per backend:")
    import blockenc._kernels as kernels

    impl = kernels._cheb_eval_impl
    try:
        for backend, fn in (("cython", impl), ("numpy", kernels._cheb_eval_fallback)):
            if backend == "cython" and KERNEL_BACKEND != "cython":
                continue
            kernels._cheb_eval_impl = fn
            t0 = time.perf_counter()
            degree = sva.min_degree(*point)
            print(f"  {backend:>6}: degree={degree} in {time.perf_counter() - t0:.2f}s")
    finally:
        kernels._cheb_eval_impl = impl


if __name__ == "__main__":
    bench_eval()
    bench_min_degree()
