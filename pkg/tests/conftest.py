import sys
from fractions import Fraction
import numpy as np
import pytest

from mersenne_lab import FactorBudget, factor_mersenne


def trial_factor(m):
    """Oracle: naive trial division, returns {p: e}."""
    out = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def brute_divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def brute_delta0(n):
    ds = brute_divisors(n)
    return max((Fraction(b, a) for a, b in zip(ds, ds[1:])), default=Fraction(1))


def brute_phi(n):
    return int(np.count_nonzero(np.gcd(np.arange(1, n + 1), n) == 1))


@pytest.fixture(scope="session")
def mersenne_table():
    """factor_mersenne(n) for 1 <= n <= 120 with the default budget, no cache."""
    return {n: factor_mersenne(n) for n in range(1, 121)}


@pytest.fixture
def tiny_budget():
    return FactorBudget(trial_division_bound=100, rho_iteration_cap=50, wall_clock_cap_ms=1000, rng_seed=7)


@pytest.fixture
def cache_path(tmp_path):
    return tmp_path / "factors.jsonl"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for tag, ok, detail in results:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {tag}: {detail}")
