"""Integer primality and factorization helpers shared by the sieve and ideal layers."""
from __future__ import annotations

import math

import numpy as np

# deterministic Miller-Rabin witness set, valid for all n < 3.3e24
_MR_BASES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 0 < n < 3.3e24."""
    if n >= _MR_LIMIT:
        raise ValueError(f"primality test out of deterministic range: {n}")
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def brent_rho(n: int) -> int:
    """Return a nontrivial factor of composite n (Brent's cycle variant).

    Deterministic: the polynomial offset walks c = 1, 2, 3, ... until a
    factor appears, so repeated runs split n identically.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


def factor_int(n: int) -> list[tuple[int, int]]:
    """Full factorization of n > 0 as sorted (prime, exponent) pairs."""
    if n <= 0:
        raise ValueError("factor_int wants n > 0")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # wheel over 6k+-1 up to a fixed small bound, then recurse via rho
    d = 7
    while d * d <= n and d < 70000:
        for q in (d, d + 4):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        d += 6
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        g = brent_rho(m)
        stack.append(g)
        stack.append(m // g)
    return sorted(out.items())


def primes_up_to(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)
