"""Randomized self-checks: sieve vs trial division, and the convolution identity."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .coprime_set import CoprimeSet, Variant, decompose
from .primes import factorize, primes_upto
from .sieve import sieve_table, verify_convolution_range


def random_coprime_set(rng: random.Random, x_max: int, variant=None,
                       max_composites: int = 5) -> CoprimeSet:
    """A mix of pairwise coprime composites and a random share of the remaining primes.

    Composites are products of two distinct primes or small prime powers, all <= x_max.
    """
    primes = [int(p) for p in primes_upto(x_max)]
    small = [p for p in primes if p * p <= x_max]
    used: set[int] = set()
    comps: list[int] = []
    for _ in range(rng.randint(1, max_composites)):
        free = [p for p in small if p not in used]
        if not free:
            break
        p = rng.choice(free)
        if rng.random() < 0.3:
            e = rng.randint(2, 4)
            c = p ** e
            if c <= x_max:
                comps.append(c)
                used.add(p)
            continue
        partners = [q for q in primes if q != p and q not in used and p * q <= x_max]
        if partners:
            q = rng.choice(partners)
            comps.append(p * q)
            used.update((p, q))
    keep = rng.uniform(0.3, 1.0)
    rest = [p for p in primes if p not in used and rng.random() < keep]
    gens = sorted(comps + rest)
    if variant is None:
        variant = rng.choice(list(Variant))
    return CoprimeSet(np.array(gens, dtype=np.int64), Variant.parse(variant), "random", x_max)


def trial_division_counts(members, n: int) -> tuple[int, int]:
    """(omega_A(n), Omega_A(n)) by testing every divisor of n for membership in ``members``."""
    divisors = [1]
    for p, e in factorize(n):
        divisors = [d * p ** i for d in divisors for i in range(e + 1)]
    w = W = 0
    for d in divisors:
        if d in members:
            w += 1
            m, v = n, 0
            while m % d == 0:
                m //= d
                v += 1
            W += v
    return w, W


@dataclass
class SuiteResult:
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def run_suite(seed: int, nmax: int, n_sets: int, *, workers: int = 1,
              segment_len: int | None = None) -> dict[str, SuiteResult]:
    """Oracle equivalence and convolution identity over ``n_sets`` seeded random sets."""
    rng = random.Random(seed)
    oracle, conv = SuiteResult(), SuiteResult()
    for s in range(n_sets):
        cset = random_coprime_set(rng, nmax)
        table = sieve_table(cset, 1, nmax, workers=workers, segment_len=segment_len)
        members = set(cset.generators.tolist())
        for n in range(1, nmax + 1):
            w, W = trial_division_counts(members, n)
            sign = -1 if (w if cset.variant is Variant.OMEGA else W) & 1 else 1
            oracle.checks += 1
            if table.at(n) != (w, W, sign):
                oracle.failures.append(f"set {s} n={n}: sieve {table.at(n)} oracle {(w, W, sign)}")
        dec = decompose(cset)
        for variant in Variant:
            res = verify_convolution_range(cset.with_variant(variant), dec, nmax,
                                           workers=workers, segment_len=segment_len)
            conv.checks += nmax
            if not res.ok:
                conv.failures.append(f"set {s} {variant.value}: {res}")
    return {"oracle": oracle, "convolution": conv}
