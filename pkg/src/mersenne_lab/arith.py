"""Exact integer arithmetic: primality, factoring and classical arithmetic functions.

Everything downstream speaks :class:`FactoredInteger`. Factoring never fails on
a hard input; it returns a ``Partial`` record holding the unsplit cofactor.
"""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod

from . import kernels

# Divisor gaps are exact rationals; Fraction keeps them reduced.
Ratio = Fraction


class IncompleteFactorizationError(ValueError):
    """An operation needs a complete factorization and got a partial one."""


class Status(str, enum.Enum):
    COMPLETE = "Complete"
    PARTIAL = "Partial"


@dataclass(frozen=True)
class FactorBudget:
    trial_division_bound: int = 1_000_000
    rho_iteration_cap: int = 20_000_000
    wall_clock_cap_ms: int = 60_000
    rng_seed: int = 1

    def __post_init__(self):
        for name in ("trial_division_bound", "rho_iteration_cap", "wall_clock_cap_ms"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not -(2**63) <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must fit in 64 bits")

    def exceeds(self, other: FactorBudget) -> bool:
        """True when this budget is at least ``other`` everywhere and larger somewhere."""
        mine = (self.trial_division_bound, self.rho_iteration_cap)
        theirs = (other.trial_division_bound, other.rho_iteration_cap)
        return all(a >= b for a, b in zip(mine, theirs)) and mine != theirs


DEFAULT_BUDGET = FactorBudget()


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...] = ()
    cofactor: int = 1
    status: Status = field(default=Status.COMPLETE)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((int(p), int(e)) for p, e in self.factors))
        object.__setattr__(self, "status", Status(self.status))
        if self.cofactor < 1:
            raise ValueError("cofactor must be >= 1")
        if (self.status is Status.COMPLETE) != (self.cofactor == 1):
            raise ValueError("status must be Complete exactly when cofactor == 1")
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError("factors must have strictly increasing primes and positive exponents")
            last = p
        if self.value != self.cofactor * prod(p**e for p, e in self.factors):
            raise ValueError(f"factors do not multiply out to {self.value}")

    @classmethod
    def from_counts(cls, value: int, counts: dict[int, int], cofactor: int = 1) -> FactoredInteger:
        status = Status.COMPLETE if cofactor == 1 else Status.PARTIAL
        return cls(value, tuple(sorted(counts.items())), cofactor, status)

    @property
    def complete(self) -> bool:
        return self.status is Status.COMPLETE

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def require_complete(self) -> FactoredInteger:
        if not self.complete:
            raise IncompleteFactorizationError(
                f"factorization of {self.value} is partial (cofactor {self.cofactor})"
            )
        return self


def pow_mod(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus by left-to-right square-and-multiply."""
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    if modulus == 1:
        return 0
    base %= modulus
    result = 1
    for bit in bin(exponent)[2:]:
        result = result * result % modulus
        if bit == "1":
            result = result * base % modulus
    return result


# Deterministic for n < 3.3e24, which covers every 64-bit input.
_FIXED_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_EXTRA_ROUNDS = 64  # 4**-64 = 2**-128
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(m: int, seed: int = DEFAULT_BUDGET.rng_seed) -> bool:
    """Miller-Rabin; exact below 2**64, error < 2**-128 above, reproducible per seed."""
    if m < 2:
        return False
    for p in _SMALL_PRIMES:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_strong_probable_prime(m, a, d, s) for a in _FIXED_BASES):
        return False
    if m < 2**64:
        return True
    rng = random.Random(seed)
    return all(
        _strong_probable_prime(m, rng.randrange(2, m - 1), d, s) for _ in range(_EXTRA_ROUNDS)
    )


def integer_root(m: int, k: int) -> int:
    """floor(m ** (1/k)) for m >= 0, k >= 1."""
    if m < 2 or k == 1:
        return m
    r = 1 << -(-m.bit_length() // k)
    while True:
        s = ((k - 1) * r + m // r ** (k - 1)) // k
        if s >= r:
            return r
        r = s


def perfect_power(m: int) -> tuple[int, int]:
    """Return (b, k) with m = b**k and k maximal."""
    best = (m, 1)
    if m < 4:
        return best
    k = 2
    while (1 << k) <= m:
        r = integer_root(m, k)
        if r**k == m:
            best = (r, k)
        k += 1
    return best


@lru_cache(maxsize=8)
def _trial_primes(bound: int) -> tuple[int, ...]:
    return tuple(int(p) for p in kernels.primes_upto(bound))


class _Clock:
    def __init__(self, budget: FactorBudget):
        self.deadline = time.monotonic() + budget.wall_clock_cap_ms / 1000.0
        self.rho_left = budget.rho_iteration_cap

    def expired(self) -> bool:
        return self.rho_left <= 0 or time.monotonic() > self.deadline


def _brent(n: int, c: int, clock: _Clock, block: int = 256) -> int | None:
    """One Brent cycle search with x -> x^2 + c from x0 = 2; a factor, n, or None."""
    y, r, q, g = 2, 1, 1, 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            if clock.expired():
                return None
            ys = y
            steps = min(block, r - k)
            for _ in range(steps):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            clock.rho_left -= steps
            g = gcd(q, n)
            k += steps
        r *= 2
    if g == n:
        # the batch overshot; step back one iteration at a time
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


def split_composite(n: int, budget: FactorBudget, clock: _Clock | None = None) -> tuple[dict[int, int], int]:
    """Break a number with no small factors into primes by perfect-power checks and rho.

    Returns (prime counts, unsplit remainder). The remainder is 1 or a product
    of composites the budget could not split.
    """
    clock = clock or _Clock(budget)
    counts: dict[int, int] = {}
    leftover = 1
    work = [(n, 1)]
    while work:
        m, mult = work.pop()
        if m == 1:
            continue
        if is_prime(m, budget.rng_seed):
            counts[m] = counts.get(m, 0) + mult
            continue
        b, k = perfect_power(m)
        if k > 1:
            work.append((b, mult * k))
            continue
        g = None
        c = budget.rng_seed % m or 1
        while g is None and not clock.expired():
            g = _brent(m, c, clock)
            if g == m:
                g = None
                c = c + 1 if c + 1 < m - 2 else 1
        if g is None:
            leftover *= m**mult
            continue
        work.append((g, mult))
        work.append((m // g, mult))
    return counts, leftover


def factor_integer(m: int, budget: FactorBudget = DEFAULT_BUDGET) -> FactoredInteger:
    """Factor ``m`` within ``budget``: perfect power, trial division, Brent rho."""
    if m < 1:
        raise ValueError("m must be >= 1")
    clock = _Clock(budget)
    counts: dict[int, int] = {}
    rest = m
    b, k = perfect_power(rest)
    if k > 1:
        sub = factor_integer(b, budget)
        counts = {p: e * k for p, e in sub.factors}
        return FactoredInteger.from_counts(m, counts, sub.cofactor**k)
    for p in _trial_primes(budget.trial_division_bound):
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            counts[p] = e
    if rest > 1:
        if rest <= budget.trial_division_bound**2 or is_prime(rest, budget.rng_seed):
            counts[rest] = counts.get(rest, 0) + 1
            rest = 1
        else:
            more, rest = split_composite(rest, budget, clock)
            for p, e in more.items():
                counts[p] = counts.get(p, 0) + e
    return FactoredInteger.from_counts(m, counts, rest)


def multiplicative_order(a: int, m: int, m_minus_1_factored: FactoredInteger) -> int:
    """Order of ``a`` modulo the prime ``m``, given the factorization of m - 1."""
    if gcd(a, m) != 1:
        raise ValueError(f"{a} and {m} are not coprime")
    f = m_minus_1_factored.require_complete()
    if f.value != m - 1:
        raise ValueError(f"expected a factorization of {m - 1}, got one of {f.value}")
    t = m - 1
    for p, _ in f.factors:
        while t % p == 0 and pow_mod(a, t // p, m) == 1:
            t //= p
    if pow_mod(a, t, m) != 1:
        raise ValueError(f"{m} is not prime: {a}^(m-1) != 1 mod m")
    return t


def tau(f: FactoredInteger) -> int:
    return prod(e + 1 for _, e in f.require_complete().factors)


def omega(f: FactoredInteger) -> int:
    return len(f.require_complete().factors)


def phi(f: FactoredInteger) -> int:
    return prod(p ** (e - 1) * (p - 1) for p, e in f.require_complete().factors)


def moebius(f: FactoredInteger) -> int:
    f.require_complete()
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def largest_prime_factor(f: FactoredInteger) -> int:
    """P(k); undefined (ValueError) for k = 1."""
    f.require_complete()
    if f.value < 2:
        raise ValueError("largest prime factor of 1 is undefined")
    return f.factors[-1][0]


def divisors(f: FactoredInteger) -> list[int]:
    divs = [1]
    for p, e in f.require_complete().factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


class SmallFactorizer:
    """Factor many small integers at once from a smallest-prime-factor table."""

    def __init__(self, limit: int):
        self.limit = int(limit)
        self.spf = kernels.spf_sieve(self.limit)

    def __call__(self, n: int) -> FactoredInteger:
        if not 1 <= n <= self.limit:
            raise ValueError(f"{n} outside the sieved range [1, {self.limit}]")
        spf = self.spf
        counts: dict[int, int] = {}
        m = n
        while m > 1:
            p = int(spf[m])
            counts[p] = counts.get(p, 0) + 1
            m //= p
        return FactoredInteger(n, tuple(sorted(counts.items())))


@lru_cache(maxsize=4096)
def factor_small(n: int) -> FactoredInteger:
    """Complete factorization of a machine-size n by trial division (cached)."""
    counts: dict[int, int] = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        counts[m] = counts.get(m, 0) + 1
    return FactoredInteger(n, tuple(sorted(counts.items())))
