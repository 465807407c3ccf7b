"""Partial sums of sum_{n>=2} (log n)^alpha / P(2^n - 1) and the empirical checks around it.

The sum starts at n = 2 because P(2^1 - 1) = P(1) is undefined. Any
expression containing log log t is only evaluated for t > e; below that the
corresponding flag is None rather than a fabricated value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from math import isqrt, log

import numpy as np

from . import kernels
from .arith import DEFAULT_BUDGET, FactorBudget, factor_small, omega, phi, tau
from .density import delta
from .mersenne import (
    MersenneFactorization,
    divisor_multiplier_set,
    factor_mersenne,
    largest_prime_factor_mersenne,
)

EULER_GAMMA = float(np.euler_gamma)


def _loglog(t: float) -> float | None:
    return math.log(math.log(t)) if t > math.e else None


class TermStatus(str, enum.Enum):
    EXACT = "Exact"
    BOUNDED = "Bounded"


@dataclass(frozen=True)
class TermRecord:
    n: int
    alpha: float
    p_exact: int | None
    p_lower: int
    term_low: float
    term_high: float
    status: TermStatus


@dataclass(frozen=True)
class PartialSumReport:
    alpha: float
    n_max: int
    sum_low: float
    sum_high: float
    terms: tuple[TermRecord, ...]
    excluded: tuple[tuple[int, str], ...] = ()

    @property
    def theorem_regime(self) -> bool:
        return self.alpha < 0.5

    @property
    def all_exact(self) -> bool:
        return all(t.status is TermStatus.EXACT for t in self.terms)


def term_record(n: int, alpha: float, mf: MersenneFactorization) -> TermRecord:
    lower, exact = largest_prime_factor_mersenne(mf)
    high = log(n) ** alpha / max(lower, 1)
    if exact is not None:
        return TermRecord(n, alpha, exact, lower, high, high, TermStatus.EXACT)
    return TermRecord(n, alpha, None, lower, 0.0, high, TermStatus.BOUNDED)


def mersenne_range(n_lo: int, n_hi: int, cache=None, budget: FactorBudget = DEFAULT_BUDGET):
    for n in range(n_lo, n_hi + 1):
        yield n, factor_mersenne(n, budget, cache)


def partial_sum_sigma(alpha: float, n_max: int, cache=None, budget: FactorBudget = DEFAULT_BUDGET) -> PartialSumReport:
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    terms = []
    excluded = []
    for n, mf in mersenne_range(2, n_max, cache, budget):
        rec = term_record(n, alpha, mf)
        terms.append(rec)
        if rec.status is TermStatus.BOUNDED:
            excluded.append((n, f"partial factorization, cofactor {mf.merged.cofactor} unsplit"))
    return PartialSumReport(
        alpha=alpha,
        n_max=n_max,
        sum_low=math.fsum(t.term_low for t in terms),
        sum_high=math.fsum(t.term_high for t in terms),
        terms=tuple(terms),
        excluded=tuple(excluded),
    )


@dataclass(frozen=True)
class ClassificationFlags:
    n: int
    alpha: float
    tau: int
    in_E: bool
    in_F: bool | None
    p_exact: int | None
    d_plus: int | None
    d_plus_bound_holds: bool | None


def e_threshold(n: int) -> float:
    return log(n) ** 3


def f_threshold(n: int, alpha: float) -> float | None:
    ll = _loglog(n)
    return None if ll is None else n * log(n) ** (1 + alpha) * ll**2


def d_plus_threshold(n: int, alpha: float) -> float | None:
    # log log n >= 1 from n = 16 on
    if n < 16:
        return None
    return log(n) ** (1 + alpha) * _loglog(n) ** 2


def classify_n(n: int, alpha: float, mf: MersenneFactorization) -> ClassificationFlags:
    """Membership in the divisor-rich set E, the large-P set F, and the D+(n) bound."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if mf.n != n:
        raise ValueError(f"factorization is for n={mf.n}, not {n}")
    t = tau(factor_small(n))
    in_e = t >= e_threshold(n)
    if not mf.complete:
        return ClassificationFlags(n, alpha, t, in_e, None, None, None, None)
    _, p = largest_prime_factor_mersenne(mf)
    f_thr = f_threshold(n, alpha)
    in_f = None if f_thr is None else p > f_thr
    d_plus = divisor_multiplier_set(mf).d_plus
    holds = None
    d_thr = d_plus_threshold(n, alpha)
    if d_thr is not None and d_plus is not None and not in_e and in_f is False:
        holds = d_plus <= d_thr
    return ClassificationFlags(n, alpha, t, in_e, in_f, p, d_plus, holds)


def stewart_lemma_ratio(mf: MersenneFactorization) -> float:
    """#{p | 2^n - 1 : p = 1 mod n} * loglog P(2^n - 1) / log(2 + Delta(n)/tau(n))."""
    n = mf.n
    if n <= 6:
        raise ValueError("the ratio is only considered for n > 6")
    _, p = largest_prime_factor_mersenne(mf)
    if p is None:
        raise ValueError(f"2^{n} - 1 is not completely factored")
    count = len(divisor_multiplier_set(mf).multipliers)
    fn = factor_small(n)
    ratio = delta(fn) / tau(fn)
    return count * _loglog(p) / log(2 + float(ratio))


@dataclass(frozen=True)
class SchinzelReport:
    n_lo: int
    n_hi: int
    violations: tuple[tuple[int, int], ...]
    unverified: tuple[int, ...]
    checked: int


def schinzel_check(n_lo: int, n_hi: int, cache=None, budget: FactorBudget = DEFAULT_BUDGET, permissive: bool = False) -> SchinzelReport:
    """Every n in range with P(2^n - 1) < 2n + 1, as (n, P) pairs."""
    if not permissive and n_lo < 13:
        raise ValueError("the bound is claimed from n = 13 on; pass permissive=True to look below")
    if n_lo < 2 or n_lo > n_hi:
        raise ValueError("need 2 <= n_lo <= n_hi")
    violations = []
    unverified = []
    for n, mf in mersenne_range(n_lo, n_hi, cache, budget):
        lower, exact = largest_prime_factor_mersenne(mf)
        if exact is None:
            if lower < 2 * n + 1:
                unverified.append(n)
        elif exact < 2 * n + 1:
            violations.append((n, exact))
    return SchinzelReport(n_lo, n_hi, tuple(violations), tuple(unverified), n_hi - n_lo + 1)


@dataclass(frozen=True)
class StewartAReport:
    n_max: int
    epsilon: float
    exceptions: tuple[int, ...]
    skipped: tuple[int, ...]

    @property
    def density(self) -> float:
        return len(self.exceptions) / self.n_max


def stewart_a_threshold(n: int, epsilon: float) -> float | None:
    ll = _loglog(n)
    if ll is None:
        return None
    return n * log(n) ** 2 / (log(n) ** epsilon * ll)


def stewart_A_exceptions(n_max: int, epsilon: float, cache=None, budget: FactorBudget = DEFAULT_BUDGET) -> StewartAReport:
    """n <= n_max with P(2^n - 1) <= n (log n)^2 / ((log n)^eps loglog n)."""
    if n_max < 16:
        raise ValueError("n_max must be >= 16")
    exceptions = []
    skipped = []
    for n, mf in mersenne_range(3, n_max, cache, budget):
        _, p = largest_prime_factor_mersenne(mf)
        if p is None:
            skipped.append(n)
        elif p <= stewart_a_threshold(n, epsilon):
            exceptions.append(n)
    return StewartAReport(n_max, epsilon, tuple(exceptions), tuple(skipped))


@dataclass(frozen=True)
class StewartBReport:
    n_max: int
    kappa: float
    big_c: float
    qualifying: tuple[int, ...]
    min_ratio: float | None
    argmin: int | None
    below_c: tuple[int, ...] = field(default=())


def stewart_b_ratio(n: int, p: int) -> float:
    fn = factor_small(n)
    return p * 2 ** omega(fn) / (phi(fn) * log(n))


def stewart_B_check(n_max: int, kappa: float, big_c: float = 0.0, cache=None, budget: FactorBudget = DEFAULT_BUDGET) -> StewartBReport:
    """Smallest P(2^n - 1) 2^omega(n) / (phi(n) log n) over n with omega(n) < kappa loglog n."""
    if n_max < 16:
        raise ValueError("n_max must be >= 16")
    if kappa >= 1 / log(2):
        raise ValueError("kappa must be below 1/log 2")
    qualifying = []
    best = None
    below = []
    for n in range(3, n_max + 1):
        if omega(factor_small(n)) >= kappa * _loglog(n):
            continue
        _, p = largest_prime_factor_mersenne(factor_mersenne(n, budget, cache))
        if p is None:
            continue
        qualifying.append(n)
        r = stewart_b_ratio(n, p)
        if best is None or r < best[0]:
            best = (r, n)
        if r < big_c:
            below.append(n)
    return StewartBReport(
        n_max, kappa, big_c, tuple(qualifying),
        None if best is None else best[0],
        None if best is None else best[1],
        tuple(below),
    )


def tau_sum_check(x: int) -> tuple[int, float]:
    """(sum_{n<=x} tau(n), x log x + (2 gamma - 1) x), the sum by the hyperbola method."""
    if x < 1:
        raise ValueError("x must be >= 1")
    s = isqrt(x)
    total = 2 * sum(x // k for k in range(1, s + 1)) - s * s
    return total, x * log(x) + (2 * EULER_GAMMA - 1) * x


def phi_min_order(x_lo: int, x_hi: int) -> tuple[float, int]:
    """Minimum of phi(n) loglog(n) / n over [x_lo, x_hi] and the first n attaining it."""
    if x_lo < 3:
        raise ValueError("x_lo must be >= 3 so that loglog n > 0")
    if x_hi < x_lo:
        raise ValueError("empty range")
    phis = kernels.phi_sieve(x_hi)[x_lo:]
    n = np.arange(x_lo, x_hi + 1, dtype=np.float64)
    vals = phis / n * np.log(np.log(n))
    i = int(np.argmin(vals))
    return float(vals[i]), x_lo + i


def e_set_counts(grid) -> dict[int, int]:
    """#E(x) = #{2 <= n <= x : tau(n) >= (log n)^3} for each x in ``grid``."""
    top = max(grid)
    taus = kernels.tau_sieve(top)
    n = np.arange(top + 1, dtype=np.float64)
    with np.errstate(divide="ignore"):
        member = taus >= np.log(n) ** 3
    member[:2] = False
    running = np.cumsum(member)
    return {x: int(running[x]) for x in grid}


@dataclass(frozen=True)
class LemmaRatioReport:
    n_lo: int
    n_hi: int
    ratios: tuple[tuple[int, float], ...]

    @property
    def minimum(self) -> tuple[int, float]:
        return min(self.ratios, key=lambda item: item[1])


def lemma_ratio_scan(n_lo: int, n_hi: int, cache=None, budget: FactorBudget = DEFAULT_BUDGET) -> LemmaRatioReport:
    ratios = []
    for n, mf in mersenne_range(max(n_lo, 7), n_hi, cache, budget):
        if mf.complete:
            ratios.append((n, stewart_lemma_ratio(mf)))
    return LemmaRatioReport(n_lo, n_hi, tuple(ratios))
