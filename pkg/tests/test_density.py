from fractions import Fraction

import numpy as np
import pytest
from conftest import brute_delta0, brute_divisors, trial_factor
from hypothesis import given, settings
from hypothesis import strategies as st

from mersenne_lab import (
    Method,
    count_dense,
    delta,
    delta0,
    dense_chain_test,
    generate_dense,
    saias_ratio,
    smooth_count,
)
from mersenne_lab.arith import FactoredInteger, IncompleteFactorizationError, SmallFactorizer, Status, factor_small
from mersenne_lab.density import dense_census, density_profile

Z_GRID = (2, 3, 4, 5, 8, 16, 100)


@pytest.fixture(scope="module")
def fac():
    return SmallFactorizer(10**5)


def brute_delta(n):
    fac = trial_factor(n)
    qual = [d for d in brute_divisors(n) if all(e <= 1 for e in trial_factor(n // d).values())]
    assert len(qual) == 2 ** len(fac)
    return max(Fraction(b, a) for a, b in zip(qual, qual[1:]))


def brute_g(x, z):
    return {n for n in range(1, x + 1) if brute_delta0(n) <= z}


@pytest.mark.parametrize("n, expected", [(12, 2), (13, 13), (8191, 8191), (1, 1), (10, Fraction(5, 2))])
def test_delta0_examples(n, expected):
    assert delta0(factor_small(n)) == expected


@pytest.mark.parametrize("n, expected", [(12, 2), (30, 2), (4, 2)])
def test_delta_examples(n, expected):
    assert delta(factor_small(n)) == expected


def test_delta_matches_oracle():
    for n in range(2, 1500):
        assert delta(factor_small(n)) == brute_delta(n), n


def test_delta0_matches_oracle():
    for n in range(1, 1500):
        assert delta0(factor_small(n)) == brute_delta0(n), n


def test_delta_rejects():
    with pytest.raises(ValueError):
        delta(factor_small(1))
    partial = FactoredInteger(22, ((2, 1),), 11, Status.PARTIAL)
    for fn in (delta, delta0):
        with pytest.raises(IncompleteFactorizationError):
            fn(partial)


def test_density_profile():
    prof = density_profile(factor_small(12))
    assert (prof.delta0, prof.delta, prof.tau, prof.omega) == (2, 2, 6, 2)


@pytest.mark.parametrize("n, z, expected", [(12, 2, True), (15, 2, False), (1, 2, True), (10, 3, True), (10, Fraction(5, 2), True), (10, Fraction(249, 100), False)])
def test_dense_chain_test_examples(n, z, expected):
    assert dense_chain_test(factor_small(n), z) is expected


def test_dense_chain_boundary_is_exact():
    # 3 <= z * 2 exactly at z = 3/2 is outside z >= 2, so use n = 2 * 5: 5 <= z * 2 at z = 5/2
    f = factor_small(10)
    assert dense_chain_test(f, Fraction(5, 2))
    assert not dense_chain_test(f, Fraction(5, 2) - Fraction(1, 10**30))


def test_dense_chain_rejects_small_z():
    with pytest.raises(ValueError):
        dense_chain_test(factor_small(6), 1)


def test_lemma3_equivalence_small_range(fac):
    num, den = dense_census(20000)
    for n in range(1, 20001):
        f = fac(n)
        for z in Z_GRID:
            assert dense_chain_test(f, z) == (num[n] <= z * den[n]), (n, z)


def test_hereditary_property(fac):
    for n in range(2, 10**4 + 1):
        f = fac(n)
        p = f.factors[-1][0]
        for z in Z_GRID:
            if dense_chain_test(f, z):
                assert dense_chain_test(fac(n // p), z)


def test_generate_dense_examples():
    assert list(generate_dense(10, 2)) == [1, 2, 6, 4, 8]
    assert set(generate_dense(10, 2)) == {1, 2, 4, 6, 8}
    assert set(generate_dense(10, 3)) == {1, 2, 3, 4, 6, 8, 9, 10}
    assert set(generate_dense(50, 50)) == set(range(1, 51))


@pytest.mark.parametrize("x, z", [(300, 2), (300, 5), (300, 30), (1000, Fraction(7, 2))])
def test_generate_dense_matches_brute_force(x, z):
    out = list(generate_dense(x, z))
    assert len(out) == len(set(out))
    assert set(out) == brute_g(x, z)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3000), st.integers(2, 60))
def test_generate_dense_property(x, z):
    out = list(generate_dense(x, z))
    assert len(out) == len(set(out))
    num, den = dense_census(max(x, 2))
    assert set(out) == {n for n in range(1, x + 1) if num[n] <= z * den[n]}


@pytest.mark.parametrize("method", list(Method))
def test_count_dense_examples(method):
    c = count_dense(10, 2, method)
    assert c.count == 5
    assert c.saias_ratio == pytest.approx(5 * np.log(10) / (10 * np.log(2)))
    assert round(c.saias_ratio, 3) == 1.661
    assert count_dense(10, 3, method).count == 8
    assert count_dense(10, 10, method).count == 10
    assert count_dense(10, 10**30, method).count == 10


def test_count_dense_methods_agree():
    for x in (2, 17, 1000, 30000):
        for z in (2, 3, 7, 30, Fraction(9, 4)):
            assert count_dense(x, z, Method.GENERATE).count == count_dense(x, z, Method.BRUTE_FORCE).count


def test_monotonicity():
    xs = (100, 1000, 5000)
    zs = (2, 3, 5, 30)
    for x in xs:
        sets = [set(generate_dense(x, z)) for z in zs]
        assert all(a <= b for a, b in zip(sets, sets[1:]))
    for z in zs:
        counts = [count_dense(x, z).count for x in xs]
        assert counts == sorted(counts)


def test_saias_ratio_examples():
    assert saias_ratio(10, 2) == pytest.approx(1.6609640474436815)
    assert saias_ratio(10, 10) == pytest.approx(1.0)


def smooth_oracle(x, y):
    return sum(1 for n in range(1, x + 1) if n == 1 or max(trial_factor(n)) <= y)


@pytest.mark.parametrize("x, y, expected", [(10, 2, 4), (16, 3, 9), (10, 10, 10), (100, 100, 100), (1, 1, 1), (10, 1, 1)])
def test_smooth_count_examples(x, y, expected):
    assert smooth_count(x, y) == expected


def test_smooth_count_against_oracle_and_monotone():
    for x in (50, 500, 2000):
        prev = 0
        for y in (1, 2, 3, 5, 7, 13, 50, 1000):
            v = smooth_count(x, y)
            assert v == smooth_oracle(x, y)
            assert v >= prev
            prev = v
    assert smooth_count(100, 5) <= smooth_count(200, 5)
