"""Streaming pigeonhole statistics of frac(n^alpha) over the N-bucket grid.

Bucket k of the grid covers [k/N - 1/(2N), k/N + 1/(2N)) modulo 1, so the
buckets tile the circle exactly once and bucket_of(x, N) = floor(x N + 1/2)
mod N.  Exponents are accepted as exact fractions p/q (enabling exact perfect
q-th power detection and removal) or as floats (double pow, no removal).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from . import kernels
from .errors import CapacityError

N_MAX = 1 << 62
BUCKET_CAP = 2 * 10**8

Alpha = Union[Fraction, float]

HALF = Fraction(1, 2)


def frac_sqrt(n: int) -> float:
    """Fractional part of sqrt(n), exact 0 on squares.

    Computed as (n - r^2)/(sqrt(n) + r) with r = isqrt(n), which keeps the
    absolute error a few ulp even when sqrt(n) is large.
    """
    if not (1 <= n <= N_MAX):
        raise ValueError(f"n must be in [1, 2^62], got {n!r}")
    r = math.isqrt(n)
    if r * r == n:
        return 0.0
    return (n - r * r) / (math.sqrt(n) + r)


def _iroot(m: int, q: int) -> int:
    """Floor integer q-th root."""
    if q == 2:
        return math.isqrt(m)
    r = round(m ** (1.0 / q))
    while r**q > m:
        r -= 1
    while (r + 1) ** q <= m:
        r += 1
    return r


def frac_pow(n: int, alpha: Alpha) -> float:
    """Fractional part of n^alpha for alpha in (0, 1).

    Rational alpha = p/q gets the same integer-root correction as frac_sqrt:
    frac = (m - r^q) / sum_i t^i r^(q-1-i) with m = n^p, r = iroot(m, q),
    t = m^(1/q); perfect q-th powers return exactly 0.
    """
    if not (0 < alpha < 1):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n!r}")
    if isinstance(alpha, Fraction):
        p, q = alpha.numerator, alpha.denominator
        m = n**p
        if m > N_MAX:
            raise CapacityError(f"n^{p} = {m} exceeds the 2^62 integer range")
        r = _iroot(m, q)
        if r**q == m:
            return 0.0
        t = float(m) ** (1.0 / q)
        den = sum(t**i * float(r) ** (q - 1 - i) for i in range(q))
        return (m - r**q) / den
    return math.pow(n, float(alpha)) % 1.0


def bucket_of(x: float, N: int) -> int:
    """The unique bucket whose half-open interval contains x in [0, 1)."""
    if not (0.0 <= x < 1.0):
        raise ValueError(f"x must lie in [0, 1), got {x!r}")
    return int(math.floor(x * N + 0.5)) % N


@dataclass(frozen=True)
class PartitionGrid:
    N: int

    def __post_init__(self):
        if not (1 <= self.N <= BUCKET_CAP):
            raise CapacityError(f"N must be in [1, {BUCKET_CAP}], got {self.N}")

    def bucket_interval(self, k: int) -> tuple[float, float]:
        return (k / self.N - 0.5 / self.N, k / self.N + 0.5 / self.N)


@dataclass(frozen=True)
class PigeonholeHistogram:
    """Per-bucket counts of {1 <= n <= floor(sN)} by the bucket of frac(n^alpha)."""

    N: int
    s: float
    alpha: Alpha
    squares_removed: bool
    counts: np.ndarray

    @property
    def n_points(self) -> int:
        return int(self.counts.sum())

    def proportions(self, j_max: int) -> tuple[np.ndarray, float]:
        """(E_0..E_jmax, tail): fractions of buckets holding exactly j points."""
        freq = np.bincount(np.minimum(self.counts, j_max + 1))
        ej = np.zeros(j_max + 1)
        upto = min(j_max + 1, len(freq))
        ej[:upto] = freq[:upto] / self.N
        tail = freq[j_max + 1] / self.N if len(freq) > j_max + 1 else 0.0
        return ej, float(tail)

    def mean(self) -> float:
        return self.n_points / self.N

    def second_moment(self) -> float:
        """(1/N) sum_k counts[k]^2, accumulated exactly in integers."""
        c = self.counts.astype(np.int64)
        return int((c * c).sum()) / self.N

    def variance(self) -> float:
        return self.second_moment() - self.mean() ** 2


def _alpha_pq(alpha: Alpha):
    """(p, q) for exact kernels, or None for the float path."""
    if isinstance(alpha, Fraction):
        if alpha.denominator in (2, 3):
            return alpha.numerator, alpha.denominator
        return None
    return None


def _check_pow_range(n_hi: int, p: int) -> None:
    if n_hi**p > N_MAX:
        raise CapacityError(f"n^{p} exceeds 2^62 for n up to {n_hi}")


def histogram(
    N: int,
    s: float,
    alpha: Alpha = HALF,
    squares_removed: bool = False,
    threads: int = 1,
) -> PigeonholeHistogram:
    """Stream n = 1 .. floor(sN) into bucket counts; O(sN) time, O(N) memory.

    `squares_removed` drops perfect q-th powers when alpha = p/q in lowest
    terms (each contributes fractional part exactly 0) and nothing otherwise.
    Thread parallelism splits the n-range; integer merges keep the result
    identical to the serial run.
    """
    if not (0 < alpha < 1):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    grid = PartitionGrid(N)
    if not (s >= 0 and math.isfinite(s)):
        raise ValueError(f"s must be a finite non-negative real, got {s!r}")
    n_hi = math.floor(s * N)
    if n_hi > N_MAX:
        raise CapacityError(f"floor(sN) = {n_hi} exceeds 2^62")
    counts = _bucket_counts_ranged(N, [(0, n_hi)], alpha, squares_removed, threads)[0]
    return PigeonholeHistogram(grid.N, s, alpha, squares_removed, counts)


def _split_range(lo: int, hi: int, parts: int):
    span = hi - lo
    if span <= 0 or parts <= 1:
        return [(lo, hi)]
    edges = [lo + span * i // parts for i in range(parts + 1)]
    return [(a, b) for a, b in zip(edges, edges[1:]) if b > a]


def _bucket_counts_ranged(N, ranges, alpha, remove, threads):
    """int64 (len(ranges), N) counts for n in each (lo, hi]."""
    pq = _alpha_pq(alpha)
    if pq is not None:
        p, q = pq
        _check_pow_range(max((hi for _, hi in ranges), default=1), p)

        def one(lo, hi):
            return kernels.powq_bucket_counts(N, lo, hi, p, q, remove)

    else:
        remove_q = alpha.denominator if isinstance(alpha, Fraction) and remove else 0

        def one(lo, hi):
            return kernels.floatpow_bucket_counts(N, lo, hi, float(alpha), remove_q)

    out = np.zeros((len(ranges), N), dtype=np.int64)
    if threads <= 1:
        for i, (lo, hi) in enumerate(ranges):
            out[i] = one(lo, hi)
        return out
    from concurrent.futures import ThreadPoolExecutor

    jobs = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for i, (lo, hi) in enumerate(ranges):
            for a, b in _split_range(lo, hi, threads):
                jobs.append((i, pool.submit(one, a, b)))
        for i, fut in jobs:
            out[i] += fut.result()
    return out


def bucket_counts_for_interval(N, a, b, alpha=HALF, squares_removed=False, threads=1):
    """Counts per bucket of {n : a < n/N <= b}, i.e. the increment histogram."""
    lo, hi = math.floor(a * N), math.floor(b * N)
    if hi > N_MAX:
        raise CapacityError(f"floor(bN) = {hi} exceeds 2^62")
    return _bucket_counts_ranged(N, [(lo, hi)], alpha, squares_removed, threads)[0]
