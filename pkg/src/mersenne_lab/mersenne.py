"""Factoring 2^n - 1 through the cyclotomic values Phi_d(2), d | n.

Each Phi_d(2) with d > 2 has prime factors p = 1 (mod d) apart from at most
one "intrinsic" prime, the largest prime factor of d. Trial division of a part
therefore only visits the progression 1 + k*d (1 + 2k*d for odd d, further
restricted to p = +-1 mod 8 since 2 is then a quadratic residue mod p).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import prod

from .arith import (
    DEFAULT_BUDGET,
    FactorBudget,
    FactoredInteger,
    IncompleteFactorizationError,
    Status,
    _Clock,
    divisors,
    factor_small,
    is_prime,
    moebius,
    split_composite,
)
from .cache import FactorCacheRecord


class InternalConsistencyError(RuntimeError):
    """An identity that must hold exactly did not (an arithmetic bug)."""


@dataclass(frozen=True)
class MersenneFactorization:
    n: int
    parts: dict[int, FactoredInteger]
    merged: FactoredInteger
    status: Status
    trial_bound: int
    rho_cap: int
    intrinsic: dict[int, int] = field(default_factory=dict)
    from_cache: bool = field(default=False, compare=False)

    @property
    def complete(self) -> bool:
        return self.status is Status.COMPLETE


@dataclass(frozen=True)
class MultiplierSet:
    n: int
    multipliers: tuple[int, ...]

    @property
    def d_plus(self) -> int | None:
        return self.multipliers[-1] if self.multipliers else None


def cyclotomic_value(d: int, f_d: FactoredInteger | None = None) -> int:
    """Phi_d(2) = prod over e | d of (2^e - 1)^mu(d/e), with exact division."""
    f_d = (f_d or factor_small(d)).require_complete()
    if f_d.value != d:
        raise ValueError(f"factorization is of {f_d.value}, not {d}")
    num = den = 1
    for e in divisors(f_d):
        mu = moebius(factor_small(d // e))
        if mu == 1:
            num *= 2**e - 1
        elif mu == -1:
            den *= 2**e - 1
    q, r = divmod(num, den)
    if r:
        raise InternalConsistencyError(f"Phi_{d}(2): {num} not divisible by {den}")
    return q


def _candidates(d: int, bound: int):
    if d <= 2:
        p = 3
        while p <= bound:
            yield p
            p += 2
        return
    step = d if d % 2 == 0 else 2 * d
    p = 1 + step
    if d % 2 == 0:
        while p <= bound:
            yield p
            p += step
        return
    while p <= bound:
        if p % 8 in (1, 7):
            yield p
        p += step


@lru_cache(maxsize=4096)
def _factor_part(d: int, budget: FactorBudget) -> tuple[FactoredInteger, int | None]:
    value = cyclotomic_value(d)
    counts: dict[int, int] = {}
    rest = value
    intrinsic = None
    if d > 2:
        q = factor_small(d).factors[-1][0]
        while rest % q == 0:
            rest //= q
            counts[q] = counts.get(q, 0) + 1
            intrinsic = q
    bound = budget.trial_division_bound
    if rest > 1:
        for p in _candidates(d, bound):
            if p * p > rest:
                break
            if rest % p == 0:
                e = 0
                while rest % p == 0:
                    rest //= p
                    e += 1
                counts[p] = counts.get(p, 0) + e
    if rest > 1:
        if rest <= bound * bound or is_prime(rest, budget.rng_seed):
            counts[rest] = counts.get(rest, 0) + 1
            rest = 1
        else:
            more, rest = split_composite(rest, budget, _Clock(budget))
            for p, e in more.items():
                counts[p] = counts.get(p, 0) + e
    return FactoredInteger.from_counts(value, counts, rest), intrinsic


def _assemble(n: int, parts: dict[int, FactoredInteger], intrinsic: dict[int, int], budget_like) -> MersenneFactorization:
    counts: dict[int, int] = {}
    cofactor = 1
    for part in parts.values():
        for p, e in part.factors:
            counts[p] = counts.get(p, 0) + e
        cofactor *= part.cofactor
    merged = FactoredInteger.from_counts(2**n - 1, counts, cofactor)
    trial_bound, rho_cap = budget_like
    return MersenneFactorization(
        n=n,
        parts=parts,
        merged=merged,
        status=merged.status,
        trial_bound=trial_bound,
        rho_cap=rho_cap,
        intrinsic=intrinsic,
    )


def _from_record(rec: FactorCacheRecord) -> MersenneFactorization:
    n = rec.n
    known = sorted(rec.prime_counts)
    parts: dict[int, FactoredInteger] = {}
    intrinsic: dict[int, int] = {}
    for d in divisors(factor_small(n)):
        value = cyclotomic_value(d)
        rest = value
        counts: dict[int, int] = {}
        for p in known:
            while rest % p == 0:
                rest //= p
                counts[p] = counts.get(p, 0) + 1
        if d > 2:
            q = factor_small(d).factors[-1][0]
            if q in counts:
                intrinsic[d] = q
        parts[d] = FactoredInteger.from_counts(value, counts, rest)
    mf = _assemble(n, parts, intrinsic, (rec.trial_bound, rec.rho_cap))
    mf = MersenneFactorization(**{**mf.__dict__, "from_cache": True})
    if mf.merged.as_dict() != rec.prime_counts or mf.merged.cofactor != int(rec.cofactor):
        raise InternalConsistencyError(f"cached record for n={n} does not split into cyclotomic parts")
    return mf


def factor_mersenne(n: int, budget: FactorBudget = DEFAULT_BUDGET, cache=None) -> MersenneFactorization:
    """Factor 2^n - 1 part by part; ``cache`` is an optional :class:`FactorCache`."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if cache is not None:
        rec = cache.get(n)
        if rec is not None:
            recorded = FactorBudget(rec.trial_bound, rec.rho_cap, budget.wall_clock_cap_ms, budget.rng_seed)
            if rec.status == Status.COMPLETE.value or not budget.exceeds(recorded):
                return _from_record(rec)
    parts: dict[int, FactoredInteger] = {}
    intrinsic: dict[int, int] = {}
    for d in divisors(factor_small(n)):
        part, q = _factor_part(d, budget)
        parts[d] = part
        if q is not None:
            intrinsic[d] = q
    mf = _assemble(n, parts, intrinsic, (budget.trial_division_bound, budget.rho_iteration_cap))
    if mf.merged.value != prod(p.value for p in parts.values()):
        raise InternalConsistencyError(f"cyclotomic parts of 2^{n} - 1 do not multiply out")
    if cache is not None:
        cache.upsert(FactorCacheRecord.from_factorization(mf))
    return mf


def verify_product(mf: MersenneFactorization) -> bool:
    """Recheck every identity of a factorization record from scratch."""
    try:
        n = mf.n
        target = 2**n - 1
        ds = divisors(factor_small(n))
        if sorted(mf.parts) != ds:
            return False
        counts: dict[int, int] = {}
        cofactor = 1
        for d in ds:
            part = mf.parts[d]
            if part.value != cyclotomic_value(d):
                return False
            if part.cofactor * prod(p**e for p, e in part.factors) != part.value:
                return False
            if (part.status is Status.COMPLETE) != (part.cofactor == 1):
                return False
            for p, e in part.factors:
                if p % d != 1 % d and mf.intrinsic.get(d) != p:
                    return False
                counts[p] = counts.get(p, 0) + e
            cofactor *= part.cofactor
        merged = mf.merged
        if prod(part.value for part in mf.parts.values()) != target:
            return False
        if merged.value != target:
            return False
        if merged.cofactor * prod(p**e for p, e in merged.factors) != target:
            return False
        if dict(merged.factors) != counts or merged.cofactor != cofactor:
            return False
        complete = all(part.status is Status.COMPLETE for part in mf.parts.values())
        return complete == (mf.status is Status.COMPLETE) == (merged.status is Status.COMPLETE)
    except (ValueError, ArithmeticError):
        return False


def largest_prime_factor_mersenne(mf: MersenneFactorization) -> tuple[int, int | None]:
    """(lower bound, exact P(2^n - 1) or None)."""
    if mf.n < 2:
        raise ValueError("P(2^1 - 1) = P(1) is undefined")
    known = mf.merged.factors[-1][0] if mf.merged.factors else 0
    if mf.complete:
        return known, known
    return max(known, mf.trial_bound), None


def divisor_multiplier_set(mf: MersenneFactorization) -> MultiplierSet:
    """D(n) = {d : dn + 1 is a prime factor of 2^n - 1}."""
    if not mf.complete:
        raise IncompleteFactorizationError(f"2^{mf.n} - 1 is not completely factored; D(n) would be undercounted")
    n = mf.n
    return MultiplierSet(n, tuple(sorted((p - 1) // n for p in mf.merged.primes if p % n == 1 % n and p > 1)))


def primitive_divisor(mf: MersenneFactorization) -> int | None:
    """Smallest prime p | 2^n - 1 with ord_p(2) = n, or None.

    The order is n exactly when 2^(n/q) != 1 (mod p) for every prime q | n;
    this avoids factoring p - 1.
    """
    if not mf.complete:
        raise IncompleteFactorizationError(f"2^{mf.n} - 1 is not completely factored")
    n = mf.n
    if n < 2:
        raise ValueError("n must be >= 2")
    qs = factor_small(n).primes
    for p in mf.merged.primes:
        if pow(2, n, p) == 1 and all(pow(2, n // q, p) != 1 for q in qs):
            return p
    return None
