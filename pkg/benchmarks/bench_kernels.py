"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--limit 1000000] [--repeat 3]

Numba compile time is excluded by a warm-up call on a tiny input. Results are
checked for equality before timing is reported.
"""

import argparse
import time

import numpy as np

from mersenne_lab import kernels
from mersenne_lab.kernels import numpy_backend


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        # (num, den) pairs compare as fractions
        return np.array_equal(a[0] * b[1], a[1] * b[0])
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--limit", type=int, default=10**6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    nb = kernels.numba_backend
    if nb is None:
        raise SystemExit("numba is not installed; nothing to compare")
    n = args.limit
    primes = kernels.primes_upto(n)
    cases = {
        "spf_sieve": lambda be: be.spf_sieve(n),
        "lpf_sieve": lambda be: be.lpf_sieve(n),
        "phi_sieve": lambda be: be.phi_sieve(n),
        "tau_sieve": lambda be: be.tau_sieve(n),
        "delta0_census": lambda be: be.delta0_census(n),
        "chain_test_census z=5": lambda be: be.chain_test_census(n, 5, 1),
        "count_dense_dfs z=100": lambda be: be.count_dense_dfs(primes, n, 100),
    }
    warm = kernels.primes_upto(50)
    nb.spf_sieve(50), nb.lpf_sieve(50), nb.phi_sieve(50), nb.tau_sieve(50)
    nb.delta0_census(50), nb.chain_test_census(50, 5, 1), nb.count_dense_dfs(warm, 50, 5)

    print(f"limit = {n:,}, best of {args.repeat}")
    print(f"{'kernel':<24}{'numba s':>10}{'numpy s':>10}{'speedup':>10}")
    for name, fn in cases.items():
        t_nb, r_nb = best_of(lambda: fn(nb), args.repeat)
        t_np, r_np = best_of(lambda: fn(numpy_backend), args.repeat)
        if not same(r_nb, r_np):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<24}{t_nb:>10.4f}{t_np:>10.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
