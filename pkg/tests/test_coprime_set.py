import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from llike import BadParams, ElementTooSmall, NotCoprime, NotInSemigroup, Variant
from llike.coprime_set import (
    builtin_family,
    decompose,
    iota,
    primality_mask,
    reciprocal_sum,
    sparse_density,
    validate,
)
from llike.primes import factorize, is_prime, primes_upto
from llike.semigroup import enumerate_semigroup
from llike.verification import random_coprime_set

from oracles import first_bad_pair, least_prime_factor, naive_is_prime, naive_primes, pairwise_coprime


def test_is_prime_matches_trial_division():
    assert [n for n in range(3000) if is_prime(n)] == naive_primes(2999)


@pytest.mark.parametrize("n", [2**61 - 1, 2**31 - 1, 1_000_000_007, 999_999_999_989])
def test_is_prime_large_primes(n):
    assert is_prime(n)


@pytest.mark.parametrize("n", [3215031751, 2152302898747, 3474749660383, 341550071728321,
                               3825123056546413051, (2**31 - 1) * (2**31 + 11)])
def test_is_prime_rejects_strong_pseudoprimes(n):
    # strong pseudoprimes to several small bases
    assert not is_prime(n)


def test_primes_upto_small_edges():
    for n in range(0, 60):
        assert primes_upto(n).tolist() == naive_primes(n)


def test_factorize_roundtrip():
    for n in range(2, 2000):
        prod = 1
        for p, e in factorize(n):
            assert naive_is_prime(p)
            prod *= p ** e
        assert prod == n


def test_validate_examples():
    s = validate([6, 35, 11])
    assert s.generators.tolist() == [6, 11, 35]
    assert pairwise_coprime(s.generators.tolist())
    assert validate([2]).generators.tolist() == [2]
    with pytest.raises(NotCoprime) as err:
        validate([6, 10])
    assert (err.value.a, err.value.b) == (6, 10)
    assert str(err.value) == "NotCoprime(6,10)"


def test_validate_rejects_small_and_duplicates():
    with pytest.raises(ElementTooSmall):
        validate([1, 5])
    with pytest.raises(ElementTooSmall):
        validate([0])
    with pytest.raises(NotCoprime):
        validate([7, 7])
    with pytest.raises(BadParams):
        validate([])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(2, 400), min_size=1, max_size=8))
def test_validate_agrees_with_gcd_oracle(values):
    bad = first_bad_pair(values)
    if bad is None:
        s = validate(values)
        assert s.generators.tolist() == sorted(values)
    else:
        with pytest.raises(NotCoprime) as err:
            validate(values)
        # the reported pair shares a factor and has the smallest possible larger element
        a, b = err.value.a, err.value.b
        assert b == bad[1]
        assert np.gcd(a, b) > 1


def test_each_prime_divides_at_most_one_generator():
    rng = random.Random(3)
    for _ in range(10):
        s = random_coprime_set(rng, 3000)
        owner = {}
        for a in s.generators.tolist():
            for p, _ in factorize(a):
                assert p not in owner
                owner[p] = a


def test_decompose_examples():
    d = decompose(validate([6, 5, 7, 11]))
    assert d.composites == (6,)
    assert d.primes.tolist() == [5, 7, 11]
    assert d.spf == {6: 2}

    d = decompose(validate([2, 3, 5]))
    assert d.composites == ()
    assert d.primes.tolist() == [2, 3, 5]

    d = decompose(validate([6, 35]))
    assert d.composites == (6, 35)
    assert d.primes.tolist() == []
    assert d.spf == {6: 2, 35: 5}


def test_decompose_is_a_partition():
    rng = random.Random(11)
    for _ in range(15):
        s = random_coprime_set(rng, 5000)
        d = decompose(s)
        assert len(d.composites) + len(d.primes) == len(s)
        assert sorted(list(d.composites) + d.primes.tolist()) == s.generators.tolist()
        assert all(naive_is_prime(p) for p in d.primes.tolist())
        assert not any(naive_is_prime(c) for c in d.composites)
        for c, p in d.spf.items():
            assert p == least_prime_factor(c) and p * p <= c
        assert len(set(d.spf.values())) == len(d.spf)


def test_composite_reciprocal_sum_bounded_by_prime_squares():
    rng = random.Random(5)
    bound = 10_000
    cap = sum(Fraction(1, p * p) for p in naive_primes(bound))
    assert float(cap) < 0.4523
    for _ in range(20):
        d = decompose(random_coprime_set(rng, bound, max_composites=12))
        assert d.recip_sum_C.exact
        assert d.recip_sum_C.value <= cap


def test_reciprocal_sums_exact_then_float():
    small = reciprocal_sum([2, 3, 5])
    assert small.exact and small.value == Fraction(31, 30)
    big = reciprocal_sum(primes_upto(10_000))
    assert not big.exact
    assert big.error > 0
    assert abs(big.value - float(sum(Fraction(1, p) for p in naive_primes(10_000)))) <= big.error


def test_primality_mask_paths_agree():
    vals = np.array([2, 4, 9, 97, 221, 1_000_003, 2**31 - 1], dtype=np.int64)
    assert primality_mask(vals).tolist() == [naive_is_prime(int(v)) for v in vals[:-1]] + [True]


def test_iota_examples():
    d = decompose(validate([6, 5, 7, 11]))
    assert iota(36, d) == 16
    assert iota(1, d) == 1
    d2 = decompose(validate([6, 35]))
    assert iota(210, d2) == 100
    with pytest.raises(NotInSemigroup):
        iota(12, d2)


def test_iota_images_are_squares_and_injective():
    rng = random.Random(8)
    for _ in range(10):
        d = decompose(random_coprime_set(rng, 20_000, max_composites=8))
        enum = enumerate_semigroup(d.composites, 20_000)
        images = [iota(m, d, e) for m, e in zip(enum.elements, enum.exponents)]
        for img in images:
            r = int(img ** 0.5)
            assert any((r + k) ** 2 == img for k in (-1, 0, 1))
        assert len(set(images)) == len(images)


def test_builtin_families():
    assert builtin_family("all-primes", 10).generators.tolist() == [2, 3, 5, 7]
    aug = builtin_family("augmented-primes", 12, inject=[6])
    assert aug.generators.tolist() == [5, 6, 7, 11]
    # index rule by hand: keep n-th prime iff floor(log2 log2 (n+16)) | n; here k = 2
    assert builtin_family("sparse-primes", 10).generators.tolist() == [3, 7]
    with pytest.raises(BadParams):
        builtin_family("augmented-primes", 100, inject=[6, 10])
    with pytest.raises(BadParams):
        builtin_family("no-such-family", 100)


def test_families_are_valid_coprime_sets():
    for name in ("all-primes", "augmented-primes", "sparse-primes"):
        s = builtin_family(name, 5000)
        assert validate(s.generators.tolist()).generators.tolist() == s.generators.tolist()
    aug = builtin_family("augmented-primes", 5000, inject=[6, 35, 121])
    assert {6, 35, 121} <= set(aug.generators.tolist())
    assert pairwise_coprime(aug.generators.tolist())


def test_sparse_primes_rule_and_thinning():
    primes = naive_primes(20_000)
    expected = []
    for n, p in enumerate(primes, 1):
        m, k = n + 16, 0
        while 2 ** (2 ** (k + 1)) <= m:
            k += 1
        if n % k == 0:
            expected.append(p)
    assert builtin_family("sparse-primes", 20_000).generators.tolist() == expected
    # retained share of primes falls as the index threshold grows
    assert sparse_density(10**3) > sparse_density(10**6)


def test_variant_parse():
    assert Variant.parse("omega") is Variant.OMEGA
    assert Variant.parse("BIG_OMEGA") is Variant.BIG_OMEGA
    with pytest.raises(BadParams):
        Variant.parse("nope")


def test_coprime_set_is_immutable():
    s = validate([6, 35])
    with pytest.raises(ValueError):
        s.generators[0] = 4
    assert 35 in s and 7 not in s
