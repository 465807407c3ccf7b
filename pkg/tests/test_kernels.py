import numpy as np
import pytest
from conftest import brute_delta0, trial_factor

from mersenne_lab import kernels
from mersenne_lab.kernels import numpy_backend

BACKENDS = [pytest.param(numpy_backend, id="numpy")]
if kernels.numba_backend is not None:
    BACKENDS.append(pytest.param(kernels.numba_backend, id="numba"))

LIMITS = [0, 1, 2, 3, 10, 97, 1000, 65536]


@pytest.fixture(params=BACKENDS)
def be(request):
    return request.param


@pytest.mark.parametrize("limit", LIMITS)
def test_spf_and_lpf(be, limit):
    spf = be.spf_sieve(limit)
    lpf = be.lpf_sieve(limit)
    for n in range(2, min(limit, 3000) + 1):
        fac = trial_factor(n)
        assert spf[n] == min(fac) and lpf[n] == max(fac)
    if limit >= 1:
        assert spf[1] == 1 and lpf[1] == 1


def test_phi_and_tau_against_oracles(be):
    phi = be.phi_sieve(3000)
    tau = be.tau_sieve(3000)
    for n in range(1, 3001):
        fac = trial_factor(n)
        assert tau[n] == np.prod([e + 1 for e in fac.values()], dtype=np.int64)
        assert phi[n] == np.prod([p ** (e - 1) * (p - 1) for p, e in fac.items()], dtype=np.int64)


def test_delta0_census_against_divisor_oracle(be):
    num, den = be.delta0_census(2000)
    for n in range(1, 2001):
        r = brute_delta0(n)
        assert num[n] * r.denominator == den[n] * r.numerator, n


@pytest.mark.parametrize("limit", LIMITS)
def test_backends_agree(limit):
    if kernels.numba_backend is None:
        pytest.skip("numba not installed")
    a, b = kernels.numba_backend, numpy_backend
    for name in ("spf_sieve", "lpf_sieve", "phi_sieve", "tau_sieve"):
        assert np.array_equal(getattr(a, name)(limit), getattr(b, name)(limit)), name
    an, ad = a.delta0_census(limit)
    bn, bd = b.delta0_census(limit)
    assert np.array_equal(an * bd, ad * bn)
    for z in ((2, 1), (3, 1), (5, 2), (100, 1)):
        assert np.array_equal(a.chain_test_census(limit, *z), b.chain_test_census(limit, *z))


@pytest.mark.parametrize("x, z", [(10, 2), (10, 3), (1000, 2), (20000, 5), (20000, 30), (500, 1000)])
def test_count_dense_dfs_backends(be, x, z):
    primes = kernels.primes_upto(x)
    num, den = numpy_backend.delta0_census(x)
    expected = int(np.count_nonzero(num[1:] <= z * den[1:]))
    assert be.count_dense_dfs(primes, x, z) == expected


def test_primes_upto():
    assert list(kernels.primes_upto(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert kernels.primes_upto(1).size == 0


def test_backend_name_reflects_env():
    assert kernels.BACKEND_NAME in ("numba", "numpy")


def test_env_flag_selects_numpy_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, MERSENNE_LAB_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from mersenne_lab import kernels; print(kernels.BACKEND_NAME)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
