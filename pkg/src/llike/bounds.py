"""Prime reciprocal sums over P, the Hall-Tenenbaum style bound and distance sums."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .coprime_set import CoprimeSet, Decomposition
from .errors import BadParams
from .sieve import lambda_prefix_sums


def _window(P, y: int, x: int) -> np.ndarray:
    P = np.asarray(P, dtype=np.int64)
    return P[(P > y) & (P <= x)]


def _recip(ps: np.ndarray, weight: int, exact: bool):
    if exact:
        return sum((Fraction(weight, int(p)) for p in ps), Fraction(0))
    return math.fsum(weight / float(p) for p in ps)


def prime_reciprocal_sum(P, x: int, *, exact: bool = False):
    """sum of 1/p over p in P with p <= x; a Fraction when ``exact``."""
    return _recip(_window(P, 0, x), 1, exact)


def distance_sum(P, y: int, x: int, *, exact: bool = False):
    """sum of 2/p over p in P with y < p <= x."""
    if not 1 <= y <= x:
        raise BadParams(f"need 1 <= y <= x, got y={y}, x={x}")
    return _recip(_window(P, y, x), 2, exact)


@dataclass(frozen=True)
class BoundReport:
    x: int
    recip_sum: float
    K: float
    ht_bound: float
    empirical: int
    ratio: float

    def to_dict(self) -> dict:
        return asdict(self)


def hall_tenenbaum_bound(cset: CoprimeSet, dec: Decomposition, x: int, K: float = 1.0, *,
                         segment_len: int | None = None, workers: int = 1) -> BoundReport:
    """Compare x * exp(-2K sum_{p <= x, p in P} 1/p) with |sum_{n <= x} lambda_P(n)|.

    Diagnostic only: the implied constant is unknown, so nothing is asserted.
    """
    if K <= 0:
        raise BadParams(f"K must be positive, got {K}")
    recip = prime_reciprocal_sum(dec.primes, x)
    bound = x * math.exp(-2.0 * K * recip)
    p_set = cset.restrict(_window(dec.primes, 0, x), "P")
    if len(p_set):
        empirical = abs(lambda_prefix_sums(p_set, [x], segment_len=segment_len, workers=workers)[0])
    else:
        empirical = x
    return BoundReport(x, recip, float(K), bound, empirical, empirical / bound)
