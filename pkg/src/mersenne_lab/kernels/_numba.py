"""Numba-compiled sieve and census kernels.

Every function here has a twin of the same name and signature in
``_numpy.py``; the two are expected to agree element for element.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def spf_sieve(limit):
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        spf[1] = 1
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            if i * i <= limit:
                for j in range(i * i, limit + 1, i):
                    if spf[j] == 0:
                        spf[j] = i
    return spf


@njit(cache=True)
def lpf_sieve(limit):
    lpf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        lpf[1] = 1
    for p in range(2, limit + 1):
        if lpf[p] == 0:
            for j in range(p, limit + 1, p):
                lpf[j] = p
    return lpf


@njit(cache=True)
def phi_sieve(limit):
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:
            for j in range(p, limit + 1, p):
                phi[j] -= phi[j] // p
    return phi


@njit(cache=True)
def tau_sieve(limit):
    tau = np.zeros(limit + 1, dtype=np.int64)
    d = 1
    while d * d <= limit:
        tau[d * d] += 1
        for j in range(d * d + d, limit + 1, d):
            tau[j] += 2
        d += 1
    return tau


@njit(cache=True)
def delta0_census(limit):
    """Largest consecutive-divisor ratio of every n <= limit, as (num, den).

    Each n is factored through the smallest-prime-factor table, its divisors
    are expanded into a scratch buffer and sorted. Entries 0 and 1 hold 1/1.
    """
    spf = spf_sieve(limit)
    num = np.ones(limit + 1, dtype=np.int64)
    den = np.ones(limit + 1, dtype=np.int64)
    buf = np.empty(4096, dtype=np.int64)
    for n in range(2, limit + 1):
        buf[0] = 1
        size = 1
        m = n
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            base = size
            pk = 1
            for _ in range(e):
                pk *= p
                for t in range(base):
                    buf[size] = buf[t] * pk
                    size += 1
        divs = np.sort(buf[:size])
        bn = 1
        bd = 1
        for i in range(1, size):
            a = divs[i]
            b = divs[i - 1]
            if a * bd > bn * b:
                bn = a
                bd = b
        num[n] = bn
        den[n] = bd
    return num, den


@njit(cache=True)
def chain_test_census(limit, z_num, z_den):
    """Dense-chain predicate p_i <= z * prod_{j<i} p_j^e_j for every n <= limit."""
    spf = spf_sieve(limit)
    out = np.zeros(limit + 1, dtype=np.bool_)
    if limit >= 1:
        out[1] = True
    for n in range(2, limit + 1):
        m = n
        prefix = 1
        ok = True
        while m > 1:
            p = spf[m]
            if p * z_den > z_num * prefix:
                ok = False
                break
            while m % p == 0:
                m //= p
                prefix *= p
        out[n] = ok
    return out


@njit(cache=True)
def count_dense_dfs(primes, x, z):
    """Size of {n <= x : Delta_0(n) <= z} by depth-first chain extension."""
    n_primes = primes.shape[0]
    stack_m = np.empty(128, dtype=np.int64)
    stack_i = np.empty(128, dtype=np.int64)
    stack_m[0] = 1
    stack_i[0] = 0
    top = 1
    count = 0
    while top > 0:
        top -= 1
        m = stack_m[top]
        i = stack_i[top]
        count += 1
        bound = x // m
        if m <= bound // z:
            bound = z * m
        while i < n_primes and primes[i] <= bound:
            p = primes[i]
            mp = m * p
            while mp <= x:
                if top == stack_m.shape[0]:
                    grown_m = np.empty(2 * top, dtype=np.int64)
                    grown_i = np.empty(2 * top, dtype=np.int64)
                    grown_m[:top] = stack_m
                    grown_i[:top] = stack_i
                    stack_m = grown_m
                    stack_i = grown_i
                stack_m[top] = mp
                stack_i[top] = i + 1
                top += 1
                if mp > x // p:
                    break
                mp *= p
            i += 1
    return count
