"""Mean values, shifted correlations and the C-part decomposition of the mean."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .coprime_set import CoprimeSet, Decomposition, Variant
from .errors import BadParams, DegenerateSpec
from .semigroup import TailReport, enumerate_semigroup, tail_mass
from .sieve import lambda_prefix_sums, lambda_values, sieve_table


@dataclass(frozen=True)
class CorrelationSpec:
    """Products lambda(a_1 n + h_1) ... lambda(a_k n + h_k).

    For k >= 2 every pair must satisfy a_i h_j != a_j h_i.
    """

    coeffs: tuple[int, ...] = (1,)
    shifts: tuple[int, ...] = (0,)

    def __post_init__(self):
        a = tuple(int(v) for v in self.coeffs)
        h = tuple(int(v) for v in self.shifts)
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "shifts", h)
        if not a or len(a) != len(h):
            raise BadParams(f"need k >= 1 coefficients and as many shifts, got {a} and {h}")
        if any(v < 1 for v in a):
            raise BadParams(f"coefficients must be positive, got {a}")
        if any(v < 0 for v in h):
            raise BadParams(f"shifts must be nonnegative, got {h}")
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                if a[i] * h[j] == a[j] * h[i]:
                    raise DegenerateSpec(i, j, a, h)

    @property
    def k(self) -> int:
        return len(self.coeffs)

    @property
    def is_mean(self) -> bool:
        return self.coeffs == (1,) and self.shifts == (0,)

    def reach(self, x: int) -> int:
        """Largest argument a_i n + h_i needed for n <= x."""
        return max(a * x + h for a, h in zip(self.coeffs, self.shifts))

    def to_dict(self) -> dict:
        return {"k": self.k, "a": list(self.coeffs), "h": list(self.shifts)}


MEAN = CorrelationSpec()


@dataclass(frozen=True)
class ConvergenceReport:
    grid: tuple[int, ...]
    counts: tuple[int, ...]
    spec: CorrelationSpec
    set_info: dict = field(default_factory=dict)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(c / x for c, x in zip(self.counts, self.grid))

    def exact_values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, x) for c, x in zip(self.counts, self.grid))

    def to_dict(self) -> dict:
        return {
            "set": self.set_info,
            "spec": self.spec.to_dict(),
            "grid": list(self.grid),
            "counts": list(self.counts),
            "values": list(self.values),
        }


def _check_grid(grid) -> tuple[int, ...]:
    grid = tuple(int(x) for x in grid)
    if not grid:
        raise BadParams("empty grid")
    if grid[0] < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise BadParams(f"grid must be strictly ascending and >= 1, got {grid}")
    return grid


def convergence_grid(cset: CoprimeSet, spec: CorrelationSpec | None, grid, *,
                     segment_len: int | None = None, workers: int = 1) -> ConvergenceReport:
    """Exact partial sums at every grid point from a single pass over the largest range."""
    spec = spec or MEAN
    grid = _check_grid(grid)
    kw = dict(segment_len=segment_len, workers=workers)
    if spec.is_mean:
        counts = lambda_prefix_sums(cset, grid, **kw)
    else:
        x = grid[-1]
        lam = lambda_values(cset, 1, spec.reach(x), **kw)
        n = np.arange(1, x + 1, dtype=np.int64)
        prod = np.ones(x, dtype=np.int8)
        for a, h in zip(spec.coeffs, spec.shifts):
            prod *= lam[a * n + h - 1]
        csum = np.cumsum(prod, dtype=np.int64)
        counts = [int(csum[g - 1]) for g in grid]
    return ConvergenceReport(grid, tuple(counts), spec, cset.describe())


def mean(cset: CoprimeSet, x: int, **kw) -> ConvergenceReport:
    return convergence_grid(cset, MEAN, [x], **kw)


def correlate(cset: CoprimeSet, spec: CorrelationSpec, x: int, **kw) -> ConvergenceReport:
    return convergence_grid(cset, spec, [x], **kw)


@dataclass(frozen=True)
class DiagnosticTerm:
    n_c: int
    lambda_c: int
    inner_sum: int  # sum of tilde-lambda_P(m) over m <= x / n_c

    def contribution(self, x: int) -> Fraction:
        return Fraction(self.lambda_c * self.inner_sum, x)

    def inner_average(self, x: int) -> Fraction:
        return Fraction(self.inner_sum * self.n_c, x)


@dataclass(frozen=True)
class TruncationReport:
    x: int
    threshold: int
    terms: tuple[DiagnosticTerm, ...]
    direct_count: int
    tail: TailReport

    @property
    def decomposed_count(self) -> int:
        return sum(t.lambda_c * t.inner_sum for t in self.terms)

    @property
    def exact(self) -> bool:
        return self.decomposed_count == self.direct_count

    @property
    def tail_contribution(self) -> Fraction:
        return sum((t.contribution(self.x) for t in self.terms if t.n_c > self.threshold), Fraction(0))

    @property
    def max_tail_average(self) -> Fraction:
        avgs = [abs(t.inner_average(self.x)) for t in self.terms if t.n_c > self.threshold]
        return max(avgs, default=Fraction(0))

    @property
    def tail_bound(self) -> Fraction:
        return self.tail.tail * self.max_tail_average

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "T": self.threshold,
            "direct_count": self.direct_count,
            "decomposed_count": self.decomposed_count,
            "exact": self.exact,
            "terms": [
                {"n_C": t.n_c, "lambda_C": t.lambda_c, "inner_sum": t.inner_sum,
                 "contribution": float(t.contribution(self.x))}
                for t in self.terms
            ],
            "tail_contribution": float(self.tail_contribution),
            "tail_mass": float(self.tail.tail),
            "tail_mass_comparison": self.tail.comparison,
            "max_tail_average": float(self.max_tail_average),
            "tail_bound": float(self.tail_bound),
        }


def truncation_diagnostic(cset: CoprimeSet, dec: Decomposition, x: int, T: int, *,
                          segment_len: int | None = None, workers: int = 1) -> TruncationReport:
    """Split sum_{n <= x} lambda_A(n) by the C-part n_C of n.

    Each n_C in <C>_x contributes lambda_C(n_C) times the partial sum of tilde-lambda_P up
    to x / n_C; the contributions must add up to the direct sum exactly.
    """
    if not 1 <= T <= x:
        raise BadParams(f"need 1 <= T <= x, got T={T}, x={x}")
    kw = dict(segment_len=segment_len, workers=workers)
    comps = np.array(dec.composites, dtype=np.int64)
    p_set = cset.restrict(dec.primes, "P")
    lam_p = lambda_values(p_set, 1, x, **kw) if len(p_set) else np.ones(x, np.int8)
    if len(comps):
        free = sieve_table(cset.restrict(comps, "C"), 1, x, **kw).omega == 0
        lam_p = np.where(free, lam_p, 0)
    prefix = np.concatenate(([0], np.cumsum(lam_p, dtype=np.int64)))

    enum = enumerate_semigroup(comps, x)
    terms = []
    for n_c, exps in zip(enum.elements, enum.exponents):
        count = len(exps) if cset.variant is Variant.OMEGA else sum(v for _, v in exps)
        terms.append(DiagnosticTerm(n_c, -1 if count & 1 else 1, int(prefix[x // n_c])))
    direct = lambda_prefix_sums(cset, [x], **kw)[0]
    return TruncationReport(x, T, tuple(terms), direct, tail_mass(enum, T))
