"""Compiled marking loops for one sieve segment [lo, hi].

All kernels take the generator array sorted ascending and stop at the first
generator above ``hi``. They hold no global state and release the GIL, so
disjoint segments can be marked from concurrent threads.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def mark_counts(gens, lo, hi, omega, big_omega):
    # omega[n - lo] += 1 for a | n; big_omega gains one more per higher power a^v | n
    for i in range(gens.shape[0]):
        a = gens[i]
        if a > hi:
            break
        q = a
        first = True
        while True:
            start = ((lo + q - 1) // q) * q
            for m in range(start, hi + 1, q):
                big_omega[m - lo] += 1
                if first:
                    omega[m - lo] += 1
            first = False
            if q > hi // a:
                break
            q *= a


@njit(cache=True, nogil=True)
def mark_parity(gens, lo, hi, with_powers, parity):
    for i in range(gens.shape[0]):
        a = gens[i]
        if a > hi:
            break
        q = a
        while True:
            start = ((lo + q - 1) // q) * q
            for m in range(start, hi + 1, q):
                parity[m - lo] ^= 1
            if not with_powers or q > hi // a:
                break
            q *= a


@njit(cache=True, nogil=True)
def mark_c_part(comps, lo, hi, n_c):
    # n_c[n - lo] collects c once per power c^v | n, giving prod c^{v_c(n)}
    for i in range(comps.shape[0]):
        c = comps[i]
        if c > hi:
            break
        q = c
        while True:
            start = ((lo + q - 1) // q) * q
            for m in range(start, hi + 1, q):
                n_c[m - lo] *= c
            if q > hi // c:
                break
            q *= c


@njit(cache=True, nogil=True)
def parity_sum(parity):
    s = 0
    for i in range(parity.shape[0]):
        s += 1 - 2 * np.int64(parity[i])
    return s
