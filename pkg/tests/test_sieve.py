import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from llike import RangeTooLarge, SetBoundExceeded, Variant
from llike.coprime_set import CoprimeSet, builtin_family, decompose, validate
from llike.sieve import (
    SieveTable,
    convolution_terms,
    extract_c_part,
    lambda_parts,
    lambda_prefix_sums,
    lambda_values,
    point_counts,
    sieve_range,
    sieve_table,
    table_digest,
    verify_convolution,
    verify_convolution_range,
)
from llike.verification import random_coprime_set

from oracles import counts, liouville_like


@pytest.fixture(scope="module")
def primes_set():
    return builtin_family("all-primes", 10**5)


@pytest.fixture(scope="module")
def augmented():
    # {6} together with every prime other than 2 and 3
    return builtin_family("augmented-primes", 10**5, inject=[6])


def test_liouville_first_ten(primes_set):
    t = sieve_range(primes_set, 1, 10)
    assert t.lam.tolist() == [1, -1, -1, 1, -1, 1, -1, -1, 1, 1]
    assert t.at(1) == (0, 0, 1)


def test_omega_variant_at_12(augmented):
    t = sieve_range(augmented.with_variant("omega"), 1, 100)
    assert t.at(12) == (1, 1, -1)


def test_agrees_with_scan_oracle_both_variants():
    rng = random.Random(2024)
    for _ in range(6):
        s = random_coprime_set(rng, 3000)
        gens = s.generators.tolist()
        t = sieve_table(s, 1, 3000, segment_len=777)
        for n in range(1, 3001):
            w, W = counts(gens, n)
            assert (int(t.omega[n - 1]), int(t.big_omega[n - 1])) == (w, W)
            assert t.lam[n - 1] == liouville_like(gens, n, s.variant is Variant.BIG_OMEGA)


def test_table_invariants():
    rng = random.Random(7)
    s = random_coprime_set(rng, 20_000)
    d = decompose(s)
    t = sieve_table(s, 1, 20_000, with_c_part=True, decomposition=d)
    n = np.arange(1, 20_001)
    assert np.all(t.omega <= t.big_omega)
    assert np.all(t.big_omega <= np.floor(np.log2(n)))
    parity = (t.omega if s.variant is Variant.OMEGA else t.big_omega) & 1
    assert np.array_equal(t.lam, 1 - 2 * parity.astype(np.int8))
    assert np.all(n % t.n_C == 0)
    cof = n // t.n_C
    for c in d.composites:
        assert not np.any(cof % c == 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5000), st.integers(1, 3000))
def test_segment_independence(seed, lo_offset, seg):
    s = random_coprime_set(random.Random(seed), 20_000)
    lo, hi = lo_offset, lo_offset + 9000
    whole = sieve_range(s, lo, hi, capacity=10**5)
    parts = sieve_table(s, lo, hi, segment_len=seg)
    assert whole.to_bytes() == parts.to_bytes()
    assert np.array_equal(lambda_values(s, lo, hi, segment_len=seg), whole.lam)


def test_workers_do_not_change_output():
    s = builtin_family("augmented-primes", 300_000, inject=[6, 35])
    base = table_digest(s, 1, 300_000, segment_len=40_000, workers=1)
    for w in (2, 4, 8):
        assert table_digest(s, 1, 300_000, segment_len=40_000, workers=w) == base


def test_range_errors(primes_set):
    with pytest.raises(RangeTooLarge):
        sieve_range(primes_set, 1, 1000, capacity=100)
    with pytest.raises(SetBoundExceeded):
        sieve_range(primes_set, 1, 10**5 + 1)
    with pytest.raises(RangeTooLarge):
        sieve_range(primes_set, 0, 10)


def test_prefix_sums_match_cumsum(primes_set):
    lam = lambda_values(primes_set, 1, 10**5)
    pts = [1, 2, 10, 99, 100, 4096, 65_537, 10**5]
    got = lambda_prefix_sums(primes_set, pts, segment_len=1000)
    assert got == [int(lam[:p].sum()) for p in pts]
    assert got[2] == 0  # L(10)


def test_liouville_completely_multiplicative():
    s = builtin_family("all-primes", 10_000)
    lam = np.concatenate(([0], sieve_range(s, 1, 10_000).lam))
    for m in range(1, 101):
        ns = np.arange(1, 10_000 // m + 1)
        assert np.array_equal(lam[m * ns], lam[m] * lam[ns])


def test_composite_generator_breaks_multiplicativity():
    s = builtin_family("augmented-primes", 1000, inject=[6])
    for variant in Variant:
        lam = sieve_range(s.with_variant(variant), 1, 1000).lam
        # 6 is a generator while 2 and 3 are not
        assert lam[6 - 1] == -1
        assert lam[2 - 1] * lam[3 - 1] == 1


def test_extract_c_part_examples(augmented):
    d = decompose(augmented)
    assert extract_c_part(augmented, d, 72) == (36, 2)
    assert extract_c_part(augmented, d, 35) == (1, 35)
    s = validate([6, 35], bound=1000)
    assert extract_c_part(s, decompose(s), 210) == (210, 1)


def test_lambda_parts_examples(augmented):
    d = decompose(augmented)
    assert lambda_parts(augmented, d, 6)[2] == 0
    assert lambda_parts(augmented, d, 72) == (1, 1, 0)
    assert lambda_parts(augmented, d, 1) == (1, 1, 1)


def test_factorization_identity_and_additivity():
    rng = random.Random(99)
    for _ in range(5):
        s = random_coprime_set(rng, 5000)
        d = decompose(s)
        t = sieve_table(s, 1, 5000)
        comps = s.restrict(d.composites, "C")
        primes = s.restrict(d.primes, "P")
        for n in range(1, 5001):
            n_c, cof = extract_c_part(s, d, n)
            lc, lp, _ = lambda_parts(s, d, n)
            assert lc * lp == t.lam[n - 1]
            wc, Wc = counts(comps.generators.tolist(), n_c)
            wp, Wp = counts(primes.generators.tolist(), cof)
            assert (wc + wp, Wc + Wp) == (t.omega[n - 1], t.big_omega[n - 1])
            assert point_counts(s, d, n) == (t.omega[n - 1], t.big_omega[n - 1])


def test_convolution_example(augmented):
    s = augmented.with_variant("big-omega")
    d = decompose(s)
    assert convolution_terms(s, d, 72) == [(1, 0), (6, 0), (36, 1)]
    assert verify_convolution(s, d, 72)


def test_convolution_without_composites(primes_set):
    d = decompose(primes_set)
    for n in (1, 2, 30, 97, 1024, 99_991):
        terms = convolution_terms(primes_set, d, n)
        assert len(terms) == 1 and terms[0][0] == 1
        assert verify_convolution(primes_set, d, n)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 10**5))
def test_convolution_random_points(seed, n):
    s = random_coprime_set(random.Random(seed), 10**5)
    d = decompose(s)
    terms = convolution_terms(s, d, n)
    assert sum(1 for _, t in terms if t) == 1
    assert verify_convolution(s, d, n)


def test_convolution_range_matches_pointwise():
    s = random_coprime_set(random.Random(1), 3000)
    d = decompose(s)
    for variant in Variant:
        sv = s.with_variant(variant)
        assert verify_convolution_range(sv, d, 3000).ok
        assert all(verify_convolution(sv, d, n) for n in range(1, 3001))


def test_csv_and_binary_roundtrip(augmented):
    t = sieve_table(augmented, 1, 50, with_c_part=True)
    lines = t.to_csv().splitlines()
    assert lines[0] == "n,omega,big_omega,lambda,n_C"
    assert lines[12] == "12,1,1,-1,6"
    blob = t.to_bytes()
    assert blob[:4] == b"LLSV"
    back = SieveTable.from_bytes(blob)
    assert (back.lo, back.hi, back.variant) == (1, 50, augmented.variant)
    assert np.array_equal(back.lam, t.lam)
    assert np.array_equal(back.omega, t.omega)
    assert np.array_equal(back.big_omega, t.big_omega)


def test_binary_header_layout(primes_set):
    import struct

    blob = sieve_range(primes_set, 5, 20).to_bytes()
    magic, version, lo, hi, variant = struct.unpack_from("<4sIQQB", blob)
    assert (magic, version, lo, hi, variant) == (b"LLSV", 1, 5, 20, 1)
    assert len(blob) == 25 + 2 + 16 + 16


def test_empty_set_is_constant():
    s = CoprimeSet(np.array([], dtype=np.int64), bound=100)
    assert np.all(sieve_range(s, 1, 100).lam == 1)


def test_scan_oracle_on_prime_powers():
    s = validate([8, 9, 25, 7], bound=10_000)
    t = sieve_range(s, 1, 10_000)
    gens = s.generators.tolist()
    for n in (8, 16, 64, 72, 512, 4096, 5832, 9000):
        assert (t.omega[n - 1], t.big_omega[n - 1]) == counts(gens, n)
