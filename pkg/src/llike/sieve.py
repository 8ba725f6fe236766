"""Segmented sieve for omega_A, Omega_A, lambda_A and the C-part n_C.

Each segment is marked independently by the compiled kernels in ``_kernels``;
multi-segment calls fan segments out over a thread pool and stitch the results
in segment order, so the output never depends on the worker count.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .coprime_set import CoprimeSet, Decomposition, Variant, decompose
from .errors import RangeTooLarge, SetBoundExceeded
from .primes import factorize
from .semigroup import enumerate_semigroup

MAX_N = 1 << 40
DEFAULT_SEGMENT_LEN = 1 << 22
DUMP_MAGIC = b"LLSV"
DUMP_VERSION = 1


def default_segment_len() -> int:
    env = os.environ.get("LLIKE_SEGMENT_LEN")
    return int(env) if env else DEFAULT_SEGMENT_LEN


@dataclass(frozen=True)
class SieveTable:
    """Per-n planes over [lo, hi]; index i holds n = lo + i.

    ``lam`` is stored unpacked as int8 (+1/-1); :meth:`packed_lambda` gives the
    bit-packed plane (bit set means -1) used by the binary dump.
    """

    lo: int
    hi: int
    variant: Variant
    omega: np.ndarray
    big_omega: np.ndarray
    lam: np.ndarray
    n_C: np.ndarray | None = None

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def at(self, n: int) -> tuple[int, int, int]:
        i = n - self.lo
        return int(self.omega[i]), int(self.big_omega[i]), int(self.lam[i])

    def packed_lambda(self) -> np.ndarray:
        return np.packbits(self.lam < 0, bitorder="little")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["n", "omega", "big_omega", "lambda"]
        if self.n_C is not None:
            header.append("n_C")
        w.writerow(header)
        ns = range(self.lo, self.hi + 1)
        cols = [ns, self.omega.tolist(), self.big_omega.tolist(), self.lam.tolist()]
        if self.n_C is not None:
            cols.append(self.n_C.tolist())
        w.writerows(zip(*cols))
        return buf.getvalue()

    def to_bytes(self) -> bytes:
        """Little-endian dump: header, packed lambda plane, omega plane, big_omega plane."""
        head = DUMP_MAGIC + struct.pack(
            "<IQQB", DUMP_VERSION, self.lo, self.hi, 0 if self.variant is Variant.OMEGA else 1
        )
        return b"".join([
            head,
            self.packed_lambda().tobytes(),
            self.omega.astype("<u1").tobytes(),
            self.big_omega.astype("<u1").tobytes(),
        ])

    @classmethod
    def from_bytes(cls, data: bytes) -> "SieveTable":
        if data[:4] != DUMP_MAGIC:
            raise ValueError("not a sieve dump (bad magic)")
        version, lo, hi, var = struct.unpack_from("<IQQB", data, 4)
        if version != DUMP_VERSION:
            raise ValueError(f"unsupported dump version {version}")
        size = hi - lo + 1
        off = 4 + struct.calcsize("<IQQB")
        nbytes = (size + 7) // 8
        bits = np.unpackbits(np.frombuffer(data, np.uint8, nbytes, off), count=size, bitorder="little")
        off += nbytes
        omega = np.frombuffer(data, np.uint8, size, off).copy()
        big = np.frombuffer(data, np.uint8, size, off + size).copy()
        lam = (1 - 2 * bits.astype(np.int8)).astype(np.int8)
        return cls(lo, hi, Variant.OMEGA if var == 0 else Variant.BIG_OMEGA, omega, big, lam)


def _check_range(cset: CoprimeSet, lo: int, hi: int):
    if lo < 1 or hi < lo:
        raise RangeTooLarge(f"need 1 <= lo <= hi, got [{lo}, {hi}]")
    if hi > MAX_N:
        raise RangeTooLarge(f"hi = {hi} exceeds 2**40")
    if hi > cset.bound:
        raise SetBoundExceeded(f"hi = {hi} exceeds the set bound {cset.bound}")


def _composites(cset: CoprimeSet, dec: Decomposition | None) -> np.ndarray:
    if dec is None:
        dec = decompose(cset)
    return np.array(dec.composites, dtype=np.int64)


def sieve_range(cset: CoprimeSet, lo: int, hi: int, *, capacity: int | None = None,
                with_c_part: bool = False, decomposition: Decomposition | None = None) -> SieveTable:
    """Sieve one segment. ``hi - lo + 1`` may not exceed ``capacity``."""
    _check_range(cset, lo, hi)
    capacity = capacity or default_segment_len()
    size = hi - lo + 1
    if size > capacity:
        raise RangeTooLarge(f"segment of {size} integers exceeds capacity {capacity}")
    omega = np.zeros(size, dtype=np.uint8)
    big = np.zeros(size, dtype=np.uint8)
    _kernels.mark_counts(cset.generators, lo, hi, omega, big)
    counts = omega if cset.variant is Variant.OMEGA else big
    lam = (1 - 2 * (counts & 1)).astype(np.int8)
    n_c = None
    if with_c_part:
        n_c = np.ones(size, dtype=np.int64)
        _kernels.mark_c_part(_composites(cset, decomposition), lo, hi, n_c)
    return SieveTable(lo, hi, cset.variant, omega, big, lam, n_c)


def segments(lo: int, hi: int, segment_len: int) -> list[tuple[int, int]]:
    if segment_len < 1:
        raise ValueError("segment length must be positive")
    return [(s, min(s + segment_len - 1, hi)) for s in range(lo, hi + 1, segment_len)]


def map_segments(fn, lo: int, hi: int, segment_len: int | None = None, workers: int = 1):
    """Apply ``fn(seg_lo, seg_hi)`` to consecutive segments, yielding results in order."""
    segs = segments(lo, hi, segment_len or default_segment_len())
    if workers <= 1 or len(segs) == 1:
        for s in segs:
            yield fn(*s)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # bounded lookahead keeps at most 2 * workers segments alive
        batch = 2 * workers
        for i in range(0, len(segs), batch):
            yield from pool.map(lambda s: fn(*s), segs[i:i + batch])


def sieve_table(cset: CoprimeSet, lo: int, hi: int, *, segment_len: int | None = None,
                workers: int = 1, with_c_part: bool = False,
                decomposition: Decomposition | None = None) -> SieveTable:
    """Sieve [lo, hi] segment by segment and concatenate the planes."""
    _check_range(cset, lo, hi)
    seg = segment_len or default_segment_len()
    if with_c_part and decomposition is None:
        decomposition = decompose(cset)
    parts = list(map_segments(
        lambda a, b: sieve_range(cset, a, b, capacity=seg, with_c_part=with_c_part,
                                 decomposition=decomposition),
        lo, hi, seg, workers,
    ))
    return SieveTable(
        lo, hi, cset.variant,
        np.concatenate([p.omega for p in parts]),
        np.concatenate([p.big_omega for p in parts]),
        np.concatenate([p.lam for p in parts]),
        np.concatenate([p.n_C for p in parts]) if with_c_part else None,
    )


def _parity_segment(cset: CoprimeSet, lo: int, hi: int) -> np.ndarray:
    parity = np.zeros(hi - lo + 1, dtype=np.uint8)
    _kernels.mark_parity(cset.generators, lo, hi, cset.variant is Variant.BIG_OMEGA, parity)
    return parity


def lambda_values(cset: CoprimeSet, lo: int, hi: int, *, segment_len: int | None = None,
                  workers: int = 1) -> np.ndarray:
    """lambda_A(n) for n in [lo, hi] as int8, via the parity-only fast path."""
    _check_range(cset, lo, hi)
    parts = map_segments(
        lambda a, b: (1 - 2 * _parity_segment(cset, a, b)).astype(np.int8),
        lo, hi, segment_len, workers,
    )
    return np.concatenate(list(parts))


def lambda_prefix_sums(cset: CoprimeSet, points, *, segment_len: int | None = None,
                       workers: int = 1) -> list[int]:
    """Exact sum_{n <= x} lambda_A(n) for every x in ``points`` (ascending), in one pass."""
    points = [int(x) for x in points]
    if not points:
        return []
    if any(b < a for a, b in zip(points, points[1:])) or points[0] < 1:
        raise ValueError("points must be ascending and >= 1")
    top = points[-1]
    _check_range(cset, 1, top)
    pts = np.array(points, dtype=np.int64)

    def work(a, b):
        parity = _parity_segment(cset, a, b)
        inside = pts[(pts >= a) & (pts <= b)]
        if len(inside) == 0:
            return _kernels.parity_sum(parity), inside, None
        csum = np.cumsum(1 - 2 * parity.astype(np.int64))
        return int(csum[-1]), inside, csum[inside - a]

    out, running = [], 0
    for total, inside, partial in map_segments(work, 1, top, segment_len, workers):
        if partial is not None:
            out.extend(int(running + v) for v in partial)
        running += int(total)
    return out


def table_digest(cset: CoprimeSet, lo: int, hi: int, *, segment_len: int | None = None,
                 workers: int = 1) -> dict:
    """SHA-256 of the omega, big_omega and lambda planes over [lo, hi], plus the lambda sum.

    Planes are streamed segment by segment, so the range never has to fit in memory.
    """
    _check_range(cset, lo, hi)
    seg = segment_len or default_segment_len()
    hashes = {k: hashlib.sha256() for k in ("omega", "big_omega", "lambda")}
    total = 0
    for t in map_segments(lambda a, b: sieve_range(cset, a, b, capacity=seg), lo, hi, seg, workers):
        hashes["omega"].update(t.omega.tobytes())
        hashes["big_omega"].update(t.big_omega.tobytes())
        hashes["lambda"].update(t.lam.tobytes())
        total += int(t.lam.sum(dtype=np.int64))
    return {"lo": lo, "hi": hi, "lambda_sum": total, **{k: h.hexdigest() for k, h in hashes.items()}}


# ---- scalar evaluation by trial division --------------------------------------------


def _sign(count: int) -> int:
    return -1 if count & 1 else 1


def _count(variant: Variant, exps) -> int:
    return len(exps) if variant is Variant.OMEGA else sum(v for _, v in exps)


def _valuation(n: int, a: int) -> int:
    v = 0
    while n % a == 0:
        n //= a
        v += 1
    return v


def _c_exponents(dec: Decomposition, n: int) -> list[tuple[int, int]]:
    return [(c, v) for c in dec.composites if c <= n and (v := _valuation(n, c))]


def _p_exponents(dec: Decomposition, n: int) -> list[tuple[int, int]]:
    primes = dec.primes
    out = []
    for p, e in factorize(n):
        i = np.searchsorted(primes, p)
        if i < len(primes) and primes[i] == p:
            out.append((p, e))
    return out


def _check_n(cset: CoprimeSet, n: int):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > cset.bound:
        raise SetBoundExceeded(f"n = {n} exceeds the set bound {cset.bound}")


def point_counts(cset: CoprimeSet, dec: Decomposition, n: int) -> tuple[int, int]:
    """(omega_A(n), Omega_A(n)) for a single n."""
    _check_n(cset, n)
    exps = _c_exponents(dec, n) + _p_exponents(dec, n)
    return len(exps), sum(v for _, v in exps)


def point_lambda(cset: CoprimeSet, dec: Decomposition, n: int) -> int:
    w, W = point_counts(cset, dec, n)
    return _sign(w if cset.variant is Variant.OMEGA else W)


def extract_c_part(cset: CoprimeSet, dec: Decomposition, n: int) -> tuple[int, int]:
    """Split n = n_C * cofactor with n_C in <C> and no generator of C dividing the cofactor."""
    _check_n(cset, n)
    n_c = 1
    for c, v in _c_exponents(dec, n):
        n_c *= c ** v
    cofactor = n // n_c
    assert not any(cofactor % c == 0 for c in dec.composites if c <= cofactor)
    return n_c, cofactor


def lambda_parts(cset: CoprimeSet, dec: Decomposition, n: int) -> tuple[int, int, int]:
    """(lambda_C(n_C), lambda_P(n / n_C), tilde-lambda_P(n)) for one n."""
    n_c, cofactor = extract_c_part(cset, dec, n)
    lam_c = _sign(_count(cset.variant, _c_exponents(dec, n_c)))
    lam_p = _sign(_count(cset.variant, _p_exponents(dec, cofactor)))
    return lam_c, lam_p, _tilde_lambda_p(cset.variant, dec, n)


def _tilde_lambda_p(variant: Variant, dec: Decomposition, m: int) -> int:
    if any(m % c == 0 for c in dec.composites if c <= m):
        return 0
    return _sign(_count(variant, _p_exponents(dec, m)))


def convolution_terms(cset: CoprimeSet, dec: Decomposition, n: int) -> list[tuple[int, int]]:
    """(d, lambda_C(d) * tilde-lambda_P(n/d)) for every d in <C> dividing n."""
    _check_n(cset, n)
    dividing = [c for c in dec.composites if c <= n and n % c == 0]
    enum = enumerate_semigroup(dividing, n)
    terms = []
    for d, exps in zip(enum.elements, enum.exponents):
        if n % d:
            continue
        terms.append((d, _sign(_count(cset.variant, exps)) * _tilde_lambda_p(cset.variant, dec, n // d)))
    return terms


def verify_convolution(cset: CoprimeSet, dec: Decomposition, n: int) -> bool:
    """Whether lambda_A(n) equals the sum over d | n, d in <C>, of lambda_C(d) tilde-lambda_P(n/d)."""
    terms = convolution_terms(cset, dec, n)
    return sum(t for _, t in terms) == point_lambda(cset, dec, n)


@dataclass(frozen=True)
class ConvolutionCheck:
    nmax: int
    mismatches: int
    bad_support: int
    first_failure: int | None

    @property
    def ok(self) -> bool:
        return self.mismatches == 0 and self.bad_support == 0


def verify_convolution_range(cset: CoprimeSet, dec: Decomposition, nmax: int, *,
                             segment_len: int | None = None, workers: int = 1) -> ConvolutionCheck:
    """Check the convolution identity for every n <= nmax at once.

    lambda_C and tilde-lambda_P come from separate sieves of C and P; the Dirichlet-style
    sum over d in <C>_nmax is accumulated on arrays and compared with the sieve of A.
    ``bad_support`` counts n whose number of nonzero summands is not exactly one.
    """
    kw = dict(segment_len=segment_len, workers=workers)
    lam_a = lambda_values(cset, 1, nmax, **kw)
    comps = np.array(dec.composites, dtype=np.int64)
    c_set = cset.restrict(comps, "C")
    p_set = cset.restrict(dec.primes, "P")
    lam_p = lambda_values(p_set, 1, nmax, **kw) if len(p_set) else np.ones(nmax, np.int8)
    if len(comps):
        c_table = sieve_table(c_set, 1, nmax, **kw)
        free = c_table.omega == 0
    else:
        free = np.ones(nmax, dtype=bool)
    tilde = np.where(free, lam_p, 0).astype(np.int64)

    total = np.zeros(nmax + 1, dtype=np.int64)
    support = np.zeros(nmax + 1, dtype=np.int64)
    enum = enumerate_semigroup(comps, nmax)
    for d, exps in zip(enum.elements, enum.exponents):
        sign = _sign(_count(cset.variant, exps))
        m = nmax // d
        total[d::d][:m] += sign * tilde[:m]
        support[d::d][:m] += tilde[:m] != 0
    bad = np.flatnonzero(total[1:] != lam_a) + 1
    bad_support = np.flatnonzero(support[1:] != 1) + 1
    first = min([int(v[0]) for v in (bad, bad_support) if len(v)], default=None)
    return ConvolutionCheck(nmax, len(bad), len(bad_support), first)
