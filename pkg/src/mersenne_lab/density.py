"""Divisor gaps, dense-divisor sets G(x, z) and smooth-number counts."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import floor, log, prod

import numpy as np

from . import kernels
from .arith import FactoredInteger, Ratio, divisors, omega, tau


class Method(str, enum.Enum):
    GENERATE = "Generate"
    BRUTE_FORCE = "BruteForce"


@dataclass(frozen=True)
class DensityProfile:
    n: int
    delta0: Ratio
    delta: Ratio
    tau: int
    omega: int


@dataclass(frozen=True)
class DenseCount:
    x: int
    z: Fraction
    count: int
    method: Method

    @property
    def saias_ratio(self) -> float:
        return self.count * log(self.x) / (self.x * log(self.z))


def _max_gap(sorted_values) -> Ratio:
    best = Fraction(1)
    for a, b in zip(sorted_values, sorted_values[1:]):
        r = Fraction(b, a)
        if r > best:
            best = r
    return best


def delta0(f: FactoredInteger) -> Ratio:
    """Largest ratio of consecutive divisors; 1 for n = 1."""
    return _max_gap(divisors(f))


def delta(f: FactoredInteger) -> Ratio:
    """Largest consecutive ratio among the divisors d with n/d squarefree."""
    f.require_complete()
    if f.value < 2:
        raise ValueError("delta is defined for n >= 2")
    primes = f.primes
    qualifying = sorted(
        f.value // prod(sub)
        for k in range(len(primes) + 1)
        for sub in combinations(primes, k)
    )
    return _max_gap(qualifying)


def density_profile(f: FactoredInteger) -> DensityProfile:
    return DensityProfile(f.value, delta0(f), delta(f), tau(f), omega(f))


def _exact(z) -> Fraction:
    z = Fraction(z)
    if z < 2:
        raise ValueError("z must be >= 2")
    return z


def dense_chain_test(f: FactoredInteger, z) -> bool:
    """p_i <= z * prod_{j<i} p_j^e_j for every prime of n, in ascending order."""
    f.require_complete()
    z = _exact(z)
    prefix = 1
    for p, e in f.factors:
        if p > z * prefix:
            return False
        prefix *= p**e
    return True


class PrimeSource:
    """Primes in ascending order, re-sieved to double the range when exhausted."""

    def __init__(self, limit: int = 1024):
        self.limit = 0
        self.primes = np.zeros(0, dtype=np.int64)
        self.grow(limit)

    def grow(self, limit: int) -> None:
        if limit > self.limit:
            self.limit = max(limit, 2 * self.limit)
            self.primes = kernels.primes_upto(self.limit)

    def upto(self, bound: int) -> np.ndarray:
        self.grow(bound)
        return self.primes[: np.searchsorted(self.primes, bound, side="right")]


def generate_dense(x: int, z, primes: PrimeSource | None = None):
    """Yield every n <= x with Delta_0(n) <= z, depth first, starting with 1."""
    if x < 1:
        return
    z = _exact(z)
    src = primes or PrimeSource()
    stack = [(1, 0)]
    while stack:
        m, i = stack.pop()
        yield m
        bound = min(x // m, floor(z * m))
        ps = src.upto(bound)
        # children pushed in reverse so smaller primes are expanded first
        children = []
        for p in ps[i:]:
            p = int(p)
            mp = m * p
            while mp <= x:
                children.append((mp, int(np.searchsorted(src.primes, p, side="right"))))
                mp *= p
        stack.extend(reversed(children))


def dense_census(x: int) -> tuple[np.ndarray, np.ndarray]:
    """Delta_0 numerators and denominators for every n <= x (sieve based)."""
    return kernels.delta0_census(x)


def count_dense(x: int, z, method: Method | str = Method.BRUTE_FORCE) -> DenseCount:
    """#G(x, z), either by the Delta_0 census or by counting the generator."""
    if x < 2:
        raise ValueError("x must be >= 2")
    method = Method(method)
    zf = _exact(z)
    if method is Method.BRUTE_FORCE:
        if zf >= x:
            return DenseCount(x, zf, x, method)
        num, den = kernels.delta0_census(x)
        # num/den <= z  <=>  num * z.den <= z.num * den
        ok = num[1:] * zf.denominator <= den[1:] * zf.numerator
        count = int(np.count_nonzero(ok))
    else:
        if zf.denominator == 1:
            # Delta_0(n) <= n, so any z beyond x behaves like z = x
            zi = min(int(zf), x)
            count = kernels.count_dense_dfs(kernels.primes_upto(x), x, zi)
        else:
            count = sum(1 for _ in generate_dense(x, zf))
    return DenseCount(x, zf, count, method)


def saias_ratio(x: int, z) -> float:
    """#G(x, z) log x / (x log z)."""
    return count_dense(x, z, Method.GENERATE).saias_ratio


def smooth_count(x: int, y: int) -> int:
    """Psi(x, y): n <= x with every prime factor <= y, counting n = 1."""
    if x < 1 or y < 1:
        raise ValueError("x and y must be positive")
    lpf = kernels.lpf_sieve(x)
    return int(np.count_nonzero(lpf[1:] <= y))
