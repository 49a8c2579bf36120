#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the NumPy fallback.

Times the elementwise special functions on large arrays, the likelihood
sum kernels, and an end-to-end six-model fit, under each available backend.

    python benchmarks/bench_kernels.py [--size 1000000] [--fit-n 10000] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from emistat import _kernels as K
from emistat.distributions import ParamVector, sample
from emistat.fitting import fit_all


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(size: int, fit_n: int, repeat: int):
    rng = np.random.default_rng(0)
    u = rng.uniform(1e-6, 1.0 - 1e-6, size)
    z = rng.normal(0.0, 2.0, size)
    x = rng.gamma(2.5, 1.3, size)
    logx = np.log(rng.uniform(0.1, 50.0, size))
    fit_data = sample(ParamVector("GAM", (2.5, 1.3)), fit_n, 7)

    cases = [
        ("norm_ppf", lambda: K.norm_ppf(u)),
        ("norm_cdf", lambda: K.norm_cdf(z)),
        ("gammainc_p", lambda: K.gammainc_p(2.5, x)),
        ("power_sum", lambda: K.power_sum(logx, 1.7, 0.3)),
        ("softplus_sum", lambda: K.softplus_sum(logx, 2.2, 0.1)),
        ("log_shift_sum", lambda: K.log_shift_sum(np.exp(logx), 1.3)),
        (f"fit_all n={fit_n}", lambda: fit_all(fit_data)),
    ]

    backends = K.available_backends()
    results = {}
    for backend in backends:
        K.set_backend(backend)
        for name, fn in cases:
            results[(backend, name)] = _time(fn, repeat)

    width = max(len(name) for name, _ in cases)
    header = f"{'case':<{width}}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, _ in cases:
        line = f"{name:<{width}}  "
        for backend in backends:
            line += f"{results[(backend, name)] * 1e3:>10.2f}ms"
        if len(backends) == 2:
            ratio = results[("python", name)] / results[("native", name)]
            line += f"{ratio:>9.1f}x"
        print(line)
    if "native" not in backends:
        print("\n(compiled kernels unavailable; showing pure-Python timings only)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=1_000_000,
                        help="array length for elementwise kernels")
    parser.add_argument("--fit-n", type=int, default=10_000,
                        help="sample size for the end-to-end fit")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    run(args.size, args.fit_n, args.repeat)


if __name__ == "__main__":
    main()
