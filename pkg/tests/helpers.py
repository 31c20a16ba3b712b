"""Shared test utilities: independent oracles and random-object builders.

The oracles here deliberately avoid the package's own factoring code so
that agreement is evidence, not circularity: plain sieves, plain trial
division, plain lattice scans.
"""

from __future__ import annotations

import math
import random

import numpy as np

from chowla.ideal_arith import Ideal, PrimeIdeal


# ------------------------------------------------------------- int oracles


def simple_primes(limit: int) -> list[int]:
    """Plain sieve of Eratosthenes, independent of the package."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [i for i in range(2, limit + 1) if flags[i]]


def spf_parity_tables(limit: int):
    """(mu, lam, omg) int arrays via a smallest-prime-factor walk."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            seg = spf[p::p]
            seg[seg == 0] = p
    mu = np.zeros(limit + 1, dtype=np.int8)
    lam = np.zeros(limit + 1, dtype=np.int8)
    omg = np.zeros(limit + 1, dtype=np.int8)
    if limit >= 1:
        mu[1] = lam[1] = omg[1] = 1
    for n in range(2, limit + 1):
        p = int(spf[n])
        m = n // p
        lam[n] = -lam[m]
        if m % p == 0:
            mu[n] = 0
            omg[n] = omg[m]
        else:
            mu[n] = -mu[m]
            omg[n] = -omg[m]
    return mu, lam, omg


def trial_factor(n: int) -> list[tuple[int, int]]:
    """Factor |n| by schoolbook trial division (n != 0)."""
    m = abs(n)
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def trial_mu(n: int) -> int:
    fs = trial_factor(n)
    if any(e > 1 for _, e in fs):
        return 0
    return -1 if len(fs) % 2 else 1


def grid_mu_sums(form, N: int) -> tuple[int, int]:
    """(points, mu-sum) over the full box [-N, N]^2 minus the origin, by
    whole-array divide-out over an independently sieved prime list."""
    xs = np.arange(-N, N + 1, dtype=np.int64)
    vals = (
        form.a * xs[None, :] ** 3
        + form.b * xs[None, :] ** 2 * xs[:, None]
        + form.c * xs[None, :] * xs[:, None] ** 2
        + form.d * xs[:, None] ** 3
    ).ravel()
    vals = np.abs(vals)
    origin = (2 * N + 1) * N + N  # flat index of (0, 0)
    vals[origin] = 1
    work = vals.copy()
    mu = np.ones(work.shape, dtype=np.int8)
    bound = int(work.max())
    for p in simple_primes(math.isqrt(bound)):
        hit = work % p == 0
        if not hit.any():
            continue
        work[hit] //= p
        mu[hit] *= -1
        again = hit & (work % p == 0)
        if again.any():
            mu[again] = 0
            while again.any():
                work[again] //= p
                again &= work % p == 0
    big = work > 1
    mu[big] *= -1
    mu[origin] = 0
    points = vals.size - 1
    return points, int(mu.astype(np.int64).sum())


# ------------------------------------------------------------- ideal builders


def random_ideal(
    rng: random.Random,
    primes: list[PrimeIdeal],
    max_primes: int = 4,
    max_exp: int = 2,
    nonunit: bool = False,
) -> Ideal:
    while True:
        k = rng.randint(1 if nonunit else 0, min(max_primes, len(primes)))
        chosen = rng.sample(primes, k)
        a = Ideal.from_factors((q, rng.randint(1, max_exp)) for q in chosen)
        if not (nonunit and a.is_unit):
            return a
