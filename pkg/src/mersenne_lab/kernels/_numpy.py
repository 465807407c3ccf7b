"""Pure-numpy fallbacks for the compiled kernels.

Loops run over primes or over d <= sqrt(limit) only; the inner work is slice
arithmetic. ``count_dense_dfs`` has no useful vectorisation and is a plain
Python depth-first walk.
"""

from __future__ import annotations

from math import isqrt

import numpy as np


def _primes_upto(limit):
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=np.bool_)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def spf_sieve(limit):
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        spf[1] = 1
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


def lpf_sieve(limit):
    lpf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        lpf[1] = 1
    for p in _primes_upto(limit):
        lpf[p::p] = p
    return lpf


def phi_sieve(limit):
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in _primes_upto(limit):
        seg = phi[p::p]
        seg -= seg // p
    return phi


def tau_sieve(limit):
    # divisor pairs (d, n/d) with d < sqrt(n) count twice, d = sqrt(n) once
    tau = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, isqrt(limit) + 1):
        tau[d * d :: d] += 2
        tau[d * d] -= 1
    return tau


def delta0_census(limit):
    """Same contract as the compiled census, via divisor pairing.

    Divisors of n above sqrt(n) mirror those below, so the gaps on the upper
    side repeat the lower ones; only the gaps among d <= sqrt(n) and the single
    middle gap n / d_mid^2 need scanning.
    """
    num = np.ones(limit + 1, dtype=np.int64)
    den = np.ones(limit + 1, dtype=np.int64)
    prev = np.ones(limit + 1, dtype=np.int64)
    for d in range(2, isqrt(limit) + 1):
        sl = slice(d * d, limit + 1, d)
        pv = prev[sl]
        bn = num[sl]
        bd = den[sl]
        better = d * bd > bn * pv
        bn[better] = d
        bd[better] = pv[better]
        prev[sl] = d
    n = np.arange(limit + 1, dtype=np.int64)
    sq = prev * prev
    better = n * den > num * sq
    better[:2] = False
    num[better] = n[better]
    den[better] = sq[better]
    return num, den


def chain_test_census(limit, z_num, z_den):
    spf = spf_sieve(limit)
    n = np.arange(limit + 1, dtype=np.int64)
    out = np.ones(limit + 1, dtype=np.bool_)
    out[0] = False
    rest = n.copy()
    prefix = np.ones(limit + 1, dtype=np.int64)
    active = np.flatnonzero(rest > 1)
    while active.size:
        m = rest[active]
        p = spf[m]
        fail = p * z_den > z_num * prefix[active]
        out[active[fail]] = False
        keep = ~fail
        active = active[keep]
        m = m[keep]
        p = p[keep]
        pref = prefix[active]
        divisible = np.ones(active.size, dtype=np.bool_)
        while divisible.any():
            m = np.where(divisible, m // p, m)
            pref = np.where(divisible, pref * p, pref)
            divisible = m % p == 0
        rest[active] = m
        prefix[active] = pref
        active = active[m > 1]
    return out


def count_dense_dfs(primes, x, z):
    primes = [int(p) for p in primes]
    count = 0
    stack = [(1, 0)]
    while stack:
        m, i = stack.pop()
        count += 1
        bound = min(x // m, z * m)
        while i < len(primes) and primes[i] <= bound:
            p = primes[i]
            mp = m * p
            while mp <= x:
                stack.append((mp, i + 1))
                mp *= p
            i += 1
    return count
