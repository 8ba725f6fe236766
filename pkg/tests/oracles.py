"""Brute-force reference implementations. Deliberately naive and independent of llike."""

from fractions import Fraction
from math import gcd


def naive_is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def naive_primes(n):
    return [p for p in range(2, n + 1) if naive_is_prime(p)]


def pairwise_coprime(values):
    values = list(values)
    return all(gcd(a, b) == 1 for i, a in enumerate(values) for b in values[i + 1:])


def first_bad_pair(values):
    values = sorted(values)
    for j, b in enumerate(values):
        for a in values[:j]:
            if gcd(a, b) != 1:
                return a, b
    return None


def least_prime_factor(n):
    d = 2
    while n % d:
        d += 1
    return d


def counts(generators, n):
    """(omega_A(n), Omega_A(n)) by scanning every generator."""
    w = W = 0
    for a in generators:
        if a > n:
            break
        if n % a == 0:
            w += 1
            v, m = 0, n
            while m % a == 0:
                m //= a
                v += 1
            W += v
    return w, W


def liouville_like(generators, n, big_omega=True):
    w, W = counts(generators, n)
    return -1 if (W if big_omega else w) % 2 else 1


def semigroup_bruteforce(composites, x):
    """Every n <= x that divides down to 1 using only the composites."""
    out = []
    for n in range(1, x + 1):
        m = n
        for c in composites:
            while m % c == 0:
                m //= c
        if m == 1:
            out.append(n)
    return out


def lcm_sum(elements, l):
    from itertools import product
    from math import lcm

    return sum((Fraction(1, lcm(*t)) for t in product(elements, repeat=l)), Fraction(0))
