"""Hot sieve kernels with a numba path and a pure-numpy path.

The numba path is used when numba imports and ``MERSENNE_LAB_NO_NUMBA`` is
unset (or "0"). Both backends stay importable so they can be compared::

    from mersenne_lab.kernels import numba_backend, numpy_backend
"""

from __future__ import annotations

import os

import numpy as np

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # numba missing
    numba_backend = None

_disabled = os.environ.get("MERSENNE_LAB_NO_NUMBA", "0") not in ("", "0")
USE_NUMBA = numba_backend is not None and not _disabled
backend = numba_backend if USE_NUMBA else numpy_backend
BACKEND_NAME = "numba" if USE_NUMBA else "numpy"


def spf_sieve(limit: int) -> np.ndarray:
    """Smallest prime factor of every n in [0, limit]; spf[1] = 1."""
    return backend.spf_sieve(int(limit))


def lpf_sieve(limit: int) -> np.ndarray:
    """Largest prime factor of every n in [0, limit]; lpf[1] = 1."""
    return backend.lpf_sieve(int(limit))


def phi_sieve(limit: int) -> np.ndarray:
    return backend.phi_sieve(int(limit))


def tau_sieve(limit: int) -> np.ndarray:
    return backend.tau_sieve(int(limit))


def delta0_census(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Unreduced (numerator, denominator) of the largest divisor gap of each n."""
    return backend.delta0_census(int(limit))


def chain_test_census(limit: int, z_num: int, z_den: int = 1) -> np.ndarray:
    return backend.chain_test_census(int(limit), int(z_num), int(z_den))


def count_dense_dfs(primes: np.ndarray, x: int, z: int) -> int:
    return int(backend.count_dense_dfs(primes, int(x), int(z)))


def primes_upto(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    spf = spf_sieve(limit)
    idx = np.arange(limit + 1)
    return idx[(spf == idx) & (idx >= 2)].astype(np.int64)
