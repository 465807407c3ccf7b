from dataclasses import replace
from math import prod

import pytest
from conftest import trial_factor

from mersenne_lab import (
    FactorBudget,
    FactorCache,
    IncompleteFactorizationError,
    Status,
    cyclotomic_value,
    divisor_multiplier_set,
    factor_integer,
    factor_mersenne,
    largest_prime_factor_mersenne,
    multiplicative_order,
    primitive_divisor,
    verify_product,
)
from mersenne_lab.arith import FactoredInteger, factor_small


def cyclotomic_oracle(d):
    """Phi_d(2) by polynomial division over the integers."""
    polys = {}
    for k in range(1, d + 1):
        if d % k:
            continue
        num = [1] + [0] * (k - 1) + [-1]  # x^k - 1, highest degree first
        for j in range(1, k):
            if k % j == 0:
                num = _polydiv(num, polys[j])
        polys[k] = num
    return sum(c * 2 ** (len(polys[d]) - 1 - i) for i, c in enumerate(polys[d]))


def _polydiv(num, den):
    num = list(num)
    out = []
    for i in range(len(num) - len(den) + 1):
        c = num[i] // den[0]
        out.append(c)
        for j, dc in enumerate(den):
            num[i + j] -= c * dc
    assert all(v == 0 for v in num[len(out):])
    return out


@pytest.mark.parametrize("d, expected", [(1, 1), (2, 3), (12, 13), (6, 3), (5, 31)])
def test_cyclotomic_value_examples(d, expected):
    assert cyclotomic_value(d, factor_small(d)) == expected


def test_cyclotomic_value_matches_polynomial_oracle():
    for d in range(1, 61):
        assert cyclotomic_value(d) == cyclotomic_oracle(d), d


def test_cyclotomic_product_identity():
    for n in range(1, 121):
        assert prod(cyclotomic_value(d) for d in range(1, n + 1) if n % d == 0) == 2**n - 1


@pytest.mark.parametrize(
    "n, merged",
    [(11, {23: 1, 89: 1}), (1, {}), (6, {3: 2, 7: 1}), (12, {3: 2, 5: 1, 7: 1, 13: 1})],
)
def test_factor_mersenne_examples(n, merged):
    mf = factor_mersenne(n)
    assert mf.merged.as_dict() == merged
    assert mf.status is Status.COMPLETE
    assert mf.merged.value == 2**n - 1


def test_factor_mersenne_parts_for_six():
    mf = factor_mersenne(6)
    assert {d: p.value for d, p in mf.parts.items()} == {1: 1, 2: 3, 3: 7, 6: 3}
    assert mf.intrinsic == {6: 3}


def test_small_mersenne_against_trial_division():
    for n in range(1, 41):
        assert factor_mersenne(n).merged.as_dict() == trial_factor(2**n - 1)


def test_all_complete_and_verified(mersenne_table):
    for n, mf in mersenne_table.items():
        assert mf.complete, n
        assert verify_product(mf), n


def test_provenance_invariant(mersenne_table):
    for n, mf in mersenne_table.items():
        for d, part in mf.parts.items():
            for p in part.primes:
                assert p % d == 1 % d or mf.intrinsic.get(d) == p == factor_small(d).factors[-1][0]


def test_merged_agrees_with_generic_factoring(mersenne_table):
    for n in range(1, 65):
        assert mersenne_table[n].merged == factor_integer(2**n - 1)


def test_verify_product_detects_corruption():
    mf = factor_mersenne(11)
    bad = FactoredInteger(2047, ((23, 1), (89, 1)))
    object.__setattr__(bad, "factors", ((23, 2), (89, 1)))
    assert not verify_product(replace(mf, merged=bad))
    assert verify_product(factor_mersenne(1))


def test_largest_prime_factor_mersenne():
    assert largest_prime_factor_mersenne(factor_mersenne(13)) == (8191, 8191)
    assert largest_prime_factor_mersenne(factor_mersenne(12)) == (13, 13)
    assert largest_prime_factor_mersenne(factor_mersenne(11)) == (89, 89)
    with pytest.raises(ValueError):
        largest_prime_factor_mersenne(factor_mersenne(1))


def test_partial_factorization_bounds(tiny_budget):
    mf = factor_mersenne(101, tiny_budget)
    assert mf.status is Status.PARTIAL
    assert verify_product(mf)
    lower, exact = largest_prime_factor_mersenne(mf)
    assert exact is None and lower == tiny_budget.trial_division_bound
    with pytest.raises(IncompleteFactorizationError):
        divisor_multiplier_set(mf)
    with pytest.raises(IncompleteFactorizationError):
        primitive_divisor(mf)


@pytest.mark.parametrize("n, mults", [(11, (2, 8)), (6, (1,)), (5, (6,))])
def test_divisor_multiplier_set_examples(n, mults):
    ms = divisor_multiplier_set(factor_mersenne(n))
    assert ms.multipliers == mults
    assert ms.d_plus == max(mults)


def test_multiplier_set_invariants(mersenne_table):
    for n in range(2, 121):
        mf = mersenne_table[n]
        ms = divisor_multiplier_set(mf)
        for d in ms.multipliers:
            p = d * n + 1
            assert pow(2, n, p) == 1 and p in mf.merged.primes
        if n >= 7:
            assert ms.multipliers, n
        if ms.d_plus is not None:
            assert largest_prime_factor_mersenne(mf)[1] >= ms.d_plus * n + 1


@pytest.mark.parametrize("n, expected", [(6, None), (4, 5), (12, 13)])
def test_primitive_divisor_examples(n, expected):
    assert primitive_divisor(factor_mersenne(n)) == expected


def test_primitive_divisor_order_and_congruence(mersenne_table):
    for n in range(2, 121):
        p = primitive_divisor(mersenne_table[n])
        if n == 6:
            assert p is None
            continue
        assert p is not None and p % n == 1 % n
        if p < 2**64:
            assert multiplicative_order(2, p, factor_integer(p - 1)) == n
        # every smaller prime factor has order a proper divisor of n
        rs = factor_small(n).primes
        for q in mersenne_table[n].merged.primes:
            if q < p:
                assert any(pow(2, n // r, q) == 1 for r in rs)


def test_cache_read_through_and_retry(cache_path, tiny_budget):
    cache = FactorCache(cache_path)
    first = factor_mersenne(11, cache=cache)
    assert cache.get(11).status == "Complete"
    again = factor_mersenne(11, cache=FactorCache(cache_path))
    assert again.from_cache and again.merged == first.merged and verify_product(again)

    partial = factor_mersenne(101, tiny_budget, cache=cache)
    assert not partial.complete and cache.get(101).status == "Partial"
    # same budget: served from cache, no retry
    assert factor_mersenne(101, tiny_budget, cache=cache).from_cache
    # larger budget: retried and upgraded
    full = factor_mersenne(101, FactorBudget(), cache=cache)
    assert full.complete and not full.from_cache
    assert FactorCache(cache_path).get(101).status == "Complete"
