"""Generator sets of pairwise coprime integers and their composite/prime split."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BadParams, ElementTooSmall, NotCoprime, NotInSemigroup
from .primes import factorize, is_prime, primes_upto, smallest_prime_factor

# Above this, primality of a generator array is decided by Miller-Rabin per element
# instead of a lookup in an Eratosthenes table.
_TABLE_PRIMALITY_LIMIT = 1 << 28
# Reciprocal sums are kept as exact fractions while the common denominator fits here.
_EXACT_DENOMINATOR_BITS = 128

FAMILIES = ("all-primes", "augmented-primes", "sparse-primes")


class Variant(str, enum.Enum):
    """Which count feeds the sign: distinct generator divisors or their multiplicities."""

    OMEGA = "omega"
    BIG_OMEGA = "big-omega"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for v in cls:
            if key in (v.value, v.name.lower().replace("_", "-")):
                return v
        raise BadParams(f"unknown variant {value!r}; expected 'omega' or 'big-omega'")


@dataclass(frozen=True)
class CoprimeSet:
    """Ascending pairwise coprime generators, all >= 2, materialized up to ``bound``.

    Instances are immutable; build them with :func:`validate` or :func:`builtin_family`.
    """

    generators: np.ndarray
    variant: Variant = Variant.BIG_OMEGA
    family: str = "user"
    bound: int = 0

    def __post_init__(self):
        gens = np.ascontiguousarray(self.generators, dtype=np.int64)
        gens.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        if not self.bound:
            object.__setattr__(self, "bound", int(gens[-1]) if len(gens) else 1)

    def __len__(self) -> int:
        return len(self.generators)

    def __contains__(self, a) -> bool:
        i = np.searchsorted(self.generators, a)
        return bool(i < len(self.generators) and self.generators[i] == a)

    def with_variant(self, variant) -> "CoprimeSet":
        return CoprimeSet(self.generators, Variant.parse(variant), self.family, self.bound)

    def restrict(self, generators, family: str) -> "CoprimeSet":
        """A sub-collection of this set's generators (coprimality is inherited)."""
        return CoprimeSet(np.asarray(generators, dtype=np.int64), self.variant, family, self.bound)

    def describe(self) -> dict:
        g = self.generators
        return {
            "family": self.family,
            "variant": self.variant.value,
            "bound": int(self.bound),
            "size": int(len(g)),
            "head": [int(a) for a in g[:8]],
        }


def validate(generators, bound: int | None = None, variant=Variant.BIG_OMEGA,
             family: str = "user") -> CoprimeSet:
    """Sort and check a generator list.

    Raises :class:`ElementTooSmall` for entries below 2 and :class:`NotCoprime` naming
    the first violating pair: the smallest ``b`` sharing a prime with an earlier
    generator, paired with the smallest such earlier ``a``.
    """
    gens = sorted(int(a) for a in generators)
    if not gens:
        raise BadParams("generator list is empty")
    for a in gens:
        if a < 2:
            raise ElementTooSmall(a)
    if bound is None:
        bound = gens[-1]
    gens = [a for a in gens if a <= bound]
    if not gens:
        raise BadParams(f"no generator is <= bound {bound}")

    owner: dict[int, int] = {}
    for b in gens:
        qs = [b] if is_prime(b) else [p for p, _ in factorize(b)]
        clash = [owner[q] for q in qs if q in owner]
        if clash:
            raise NotCoprime(min(clash), b)
        for q in qs:
            owner[q] = b
    return CoprimeSet(np.array(gens, dtype=np.int64), Variant.parse(variant), family, bound)


def primality_mask(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    if len(values) == 0:
        return np.zeros(0, dtype=bool)
    top = int(values.max())
    if top <= _TABLE_PRIMALITY_LIMIT:
        table = np.zeros(top + 1, dtype=bool)
        table[primes_upto(top)] = True
        return table[values]
    return np.array([is_prime(int(v)) for v in values], dtype=bool)


@dataclass(frozen=True)
class ReciprocalSum:
    """Partial sum of 1/a; ``value`` is a Fraction when exact, else a float with ``error`` bound."""

    value: Fraction | float
    error: float = 0.0

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def __float__(self) -> float:
        return float(self.value)


def reciprocal_sum(values) -> ReciprocalSum:
    # pairwise coprime values: the common denominator is their product
    values = [int(v) for v in values]
    bits = sum(v.bit_length() for v in values)
    if bits <= _EXACT_DENOMINATOR_BITS:
        return ReciprocalSum(sum((Fraction(1, v) for v in values), Fraction(0)))
    total = math.fsum(1.0 / v for v in values)
    # each 1/v is rounded once (rel. 2**-53) and fsum rounds once more
    return ReciprocalSum(total, 2.0 ** -52 * total)


@dataclass(frozen=True)
class Decomposition:
    """Composite part C, prime part P and the least-prime-factor map on C."""

    composites: tuple[int, ...]
    primes: np.ndarray
    spf: dict[int, int] = field(repr=False)
    recip_sum_C: ReciprocalSum = ReciprocalSum(Fraction(0))
    recip_sum_P: ReciprocalSum = ReciprocalSum(Fraction(0))

    def __post_init__(self):
        self.primes.setflags(write=False)


def decompose(cset: CoprimeSet) -> Decomposition:
    gens = cset.generators
    mask = primality_mask(gens)
    primes = np.array(gens[mask], dtype=np.int64)
    composites = tuple(int(c) for c in gens[~mask])
    spf = {c: smallest_prime_factor(c) for c in composites}
    seen = set()
    for c, p in spf.items():
        assert p * p <= c and c % p == 0
        assert p not in seen, f"least prime factor {p} shared inside C"
        seen.add(p)
    return Decomposition(composites, primes, spf, reciprocal_sum(composites), reciprocal_sum(primes))


def iota(m: int, dec: Decomposition, exponents=None) -> int:
    """Map m = prod c_j^v_j in <C> to the perfect square prod p_{c_j}^(2 v_j).

    ``exponents`` may carry m's sparse exponent vector as (generator, exponent) pairs;
    otherwise it is recovered by dividing out the generators of C.
    """
    if exponents is None:
        exponents = semigroup_exponents(m, dec.composites)
    root = 1
    for c, v in exponents:
        root *= dec.spf[c] ** v
    return root * root


def semigroup_exponents(m: int, composites) -> list[tuple[int, int]]:
    if m < 1:
        raise NotInSemigroup(f"{m} is not a positive integer")
    rest, out = m, []
    for c in composites:
        if c > rest:
            break
        v = 0
        while rest % c == 0:
            rest //= c
            v += 1
        if v:
            out.append((c, v))
    if rest != 1:
        raise NotInSemigroup(f"{m} has the factor {rest} outside <C>")
    return out


def _sparse_index_keep(n: np.ndarray) -> np.ndarray:
    """Keep the n-th prime (1-based) iff floor(log2 log2 (n + 16)) divides n."""
    m = n + 16
    # floor(log2 log2 m) = #{j >= 1 : m >= 2**(2**j)}, exact in integers
    k = np.zeros_like(m)
    for j in range(1, 7):
        k += m >= (1 << (1 << j))
    return n % k == 0


def builtin_family(name: str, x_max: int, variant=Variant.BIG_OMEGA, inject=None) -> CoprimeSet:
    """Materialize a shipped family up to ``x_max``.

    all-primes: every prime. augmented-primes: the injected pairwise coprime
    composites plus every prime not dividing any of them (default inject {6}).
    sparse-primes: the n-th prime for n divisible by floor(log2 log2 (n + 16)); a
    relative-density-zero subset of the primes whose reciprocal sum still diverges.
    """
    variant = Variant.parse(variant)
    if x_max < 2:
        raise BadParams(f"x_max must be >= 2, got {x_max}")
    primes = primes_upto(x_max)
    if name == "all-primes":
        gens = primes
    elif name == "augmented-primes":
        inject = (6,) if inject is None else tuple(int(c) for c in inject)
        try:
            validate(inject)
        except (NotCoprime, ElementTooSmall) as exc:
            raise BadParams(f"injected composites are not a valid coprime set: {exc}") from exc
        banned = sorted({p for c in inject for p, _ in factorize(c)})
        keep = primes[~np.isin(primes, banned)]
        extra = [c for c in inject if c <= x_max]
        gens = np.unique(np.concatenate((keep, np.array(extra, dtype=np.int64))))
    elif name == "sparse-primes":
        idx = np.arange(1, len(primes) + 1, dtype=np.int64)
        gens = primes[_sparse_index_keep(idx)]
    else:
        raise BadParams(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    if len(gens) == 0:
        raise BadParams(f"family {name} has no generators <= {x_max}")
    return CoprimeSet(gens, variant, name, int(x_max))


def sparse_density(x_max: int) -> float:
    """Fraction of primes <= x_max retained by the sparse-primes rule."""
    primes = primes_upto(x_max)
    idx = np.arange(1, len(primes) + 1, dtype=np.int64)
    return float(_sparse_index_keep(idx).mean()) if len(primes) else 0.0
