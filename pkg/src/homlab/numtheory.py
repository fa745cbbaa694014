"""Small prime/number-theory helpers shared by the oracle modules."""

from __future__ import annotations


def is_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin below 3.3e24 with this witness set
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_class(residue, modulus=4):
    """Infinite generator of primes in one residue class."""
    n = 2
    while True:
        if n % modulus == residue and is_prime(n):
            yield n
        n += 1


def first_primes_in_class(count, residue, modulus=4):
    out = []
    gen = primes_in_class(residue, modulus)
    while len(out) < count:
        out.append(next(gen))
    return out


def quadratic_residue(q, p):
    """Euler criterion: is q a quadratic residue mod the odd prime p?"""
    return pow(q % p, (p - 1) // 2, p) == 1
