"""Truncations of the multiplicative semigroup generated by the composite part C."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt, lcm, sqrt

from .errors import ArityTooLarge, BadParams, SemigroupOverflow

INT64_MAX = (1 << 63) - 1
MAX_ARITY = 4


@dataclass(frozen=True)
class SemigroupEnumeration:
    """Ascending elements of <C> up to ``bound`` with sparse exponent vectors.

    ``exponents[i]`` lists (generator, exponent) pairs for ``elements[i]``; 1 carries ().
    """

    bound: int
    generators: tuple[int, ...]
    elements: tuple[int, ...]
    exponents: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def count(self) -> int:
        return len(self.elements)

    def truncate(self, y: int) -> "SemigroupEnumeration":
        keep = [i for i, n in enumerate(self.elements) if n <= y]
        return SemigroupEnumeration(
            y, self.generators, tuple(self.elements[i] for i in keep),
            tuple(self.exponents[i] for i in keep),
        )

    def squarefree(self) -> "SemigroupEnumeration":
        """Elements using each generator at most once, i.e. the divisors of prod C."""
        keep = [i for i, e in enumerate(self.exponents) if all(v == 1 for _, v in e)]
        return SemigroupEnumeration(
            self.bound, self.generators, tuple(self.elements[i] for i in keep),
            tuple(self.exponents[i] for i in keep),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["element", "exponents"])
        for n, e in zip(self.elements, self.exponents):
            w.writerow([n, "/".join(f"{c}:{v}" for c, v in e)])
        return buf.getvalue()


def enumerate_semigroup(composites, x: int) -> SemigroupEnumeration:
    """Every product of powers of ``composites`` not exceeding ``x``.

    Depth-first over ascending generators, pruning once the running product passes x.
    """
    gens = tuple(sorted(int(c) for c in composites))
    if x < 1:
        raise BadParams(f"bound must be >= 1, got {x}")
    if x > INT64_MAX:
        raise SemigroupOverflow(f"bound {x} exceeds the 64-bit range")
    if any(c < 4 for c in gens):
        raise BadParams("composite generators are >= 4")

    found: list[tuple[int, tuple]] = []
    stack = [(0, 1, ())]
    while stack:
        start, prod, exps = stack.pop()
        found.append((prod, exps))
        for j in range(start, len(gens)):
            c = gens[j]
            if prod > x // c:
                break
            q, v = prod * c, 1
            while True:
                if q > INT64_MAX:
                    raise SemigroupOverflow(f"product {q} overflows 64 bits")
                stack.append((j + 1, q, exps + ((c, v),)))
                if q > x // c:
                    break
                q, v = q * c, v + 1
    found.sort()
    enum = SemigroupEnumeration(x, gens, tuple(n for n, _ in found), tuple(e for _, e in found))
    assert enum.count <= isqrt(x), f"|<C>_x| = {enum.count} exceeds sqrt({x})"
    return enum


@dataclass(frozen=True)
class MassReport:
    value: Fraction
    bound: Fraction | float


def reciprocal_mass(enum: SemigroupEnumeration) -> MassReport:
    """Exact sum of 1/n over the enumeration, with prod (1 + 1/(c-1)) over c <= x."""
    value = sum((Fraction(1, n) for n in enum.elements), Fraction(0))
    bound = Fraction(1)
    for c in enum.generators:
        if c <= enum.bound:
            bound *= Fraction(c, c - 1)
    return MassReport(value, bound)


def _power_series(c: int, l: int) -> float:
    # sum_{v >= 1} (v + 1)**l / c**v, summed until terms drop below double precision
    total, v = 0.0, 1
    while True:
        term = (v + 1) ** l / c ** v
        total += term
        if term < 1e-18 * total:
            return total
        v += 1


def lcm_moment(composites, l: int, x: int) -> MassReport:
    """Exact sum of 1/lcm(n_1..n_l) over l-tuples from <C>_x, plus the product bound."""
    if l < 1:
        raise BadParams(f"arity must be >= 1, got {l}")
    if l > MAX_ARITY:
        raise ArityTooLarge(f"arity {l} > {MAX_ARITY}")
    enum = enumerate_semigroup(composites, x)
    total = Fraction(0)
    for tup in product(enum.elements, repeat=l):
        total += Fraction(1, lcm(*tup))
    bound = 1.0
    for c in enum.generators:
        if c <= x:
            bound *= 1.0 + _power_series(c, l)
    return MassReport(total, bound)


@dataclass(frozen=True)
class TailReport:
    threshold: int
    tail: Fraction
    tail_count: int
    mass: Fraction
    comparison: float

    @property
    def count_bound(self) -> Fraction:
        return Fraction(self.tail_count, self.threshold)


def tail_mass(enum: SemigroupEnumeration, T: int) -> TailReport:
    """Sum of 1/n over elements above ``T``, reported with T**-1/2 * I(x)."""
    if not 1 <= T <= enum.bound:
        raise BadParams(f"threshold must satisfy 1 <= T <= {enum.bound}, got {T}")
    tail_elems = [n for n in enum.elements if n > T]
    tail = sum((Fraction(1, n) for n in tail_elems), Fraction(0))
    mass = reciprocal_mass(enum).value
    return TailReport(T, tail, len(tail_elems), mass, float(mass) / sqrt(T))
