"""Empirical point processes of bucket arrival times.

Bucket k of the N-grid receives an atom at s = n/N whenever frac(n^alpha)
lands in it; restricted to [0, s] the atom count reproduces the histogram
count.  Atoms can be carried in the area parameter ("s", values n/N) or its
square root ("sqrt_s"); every sample is flagged so the two are never mixed
silently.  The limit-side samples produced by lattice.jump_points use
"sqrt_s", where an atom sits at the x-coordinate of the cone point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CapacityError
from .seqstats import HALF, N_MAX, PartitionGrid, _alpha_pq, _bucket_counts_ranged

PARAMS = ("s", "sqrt_s")


@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint ordered union of half-open intervals (a_1, b_1], ..., (a_k, b_k]."""

    intervals: tuple

    def __post_init__(self):
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", iv)
        prev = 0.0
        first = True
        for a, b in iv:
            if a < 0 or not a < b or (not first and a < prev):
                raise ValueError(
                    f"need 0 <= a1 < b1 <= a2 < b2 <= ..., got {iv}"
                )
            prev = b
            first = False

    @classmethod
    def parse(cls, text: str) -> "IntervalUnion":
        """Parse 'a1,b1;a2,b2;...'."""
        pairs = []
        for part in text.split(";"):
            a, b = part.split(",")
            pairs.append((float(a), float(b)))
        return cls(tuple(pairs))

    def __contains__(self, x: float) -> bool:
        return any(a < x <= b for a, b in self.intervals)

    @property
    def upper(self) -> float:
        return self.intervals[-1][1]

    def n_ranges(self, N: int):
        """Integer ranges (lo, hi] with n/N in each interval."""
        return [(math.floor(a * N), math.floor(b * N)) for a, b in self.intervals]


@dataclass(frozen=True)
class ProcessSample:
    """Sorted finite multiset of atom positions with a parametrization flag."""

    atoms: np.ndarray
    param: str

    def __post_init__(self):
        a = np.asarray(self.atoms, dtype=np.float64)
        object.__setattr__(self, "atoms", a)
        if self.param not in PARAMS:
            raise ValueError(f"param must be one of {PARAMS}, got {self.param!r}")
        if a.size and (np.any(np.diff(a) < 0) or a[0] < 0):
            raise ValueError("atoms must be sorted and non-negative")

    def __len__(self) -> int:
        return int(self.atoms.size)

    def to_param(self, param: str) -> "ProcessSample":
        if param == self.param:
            return self
        if param == "s":
            return ProcessSample(self.atoms**2, "s")
        return ProcessSample(np.sqrt(self.atoms), "sqrt_s")

    def restrict(self, hi: float) -> "ProcessSample":
        return ProcessSample(self.atoms[self.atoms <= hi], self.param)

    def count_in(self, interval_union: IntervalUnion, param: str = "s") -> int:
        """Atoms in the union, whose intervals are read in `param` coordinates."""
        atoms = self.to_param(param).atoms
        total = 0
        for a, b in interval_union.intervals:
            total += int(np.sum((atoms > a) & (atoms <= b)))
        return total


def empirical_jumps(k: int, N: int, s_max: float, alpha=HALF) -> ProcessSample:
    """Atoms {n/N : n <= floor(s_max N), frac(n^alpha) in bucket k}, ascending."""
    grid = PartitionGrid(N)
    if not 0 <= k < N:
        raise ValueError(f"bucket index {k} outside [0, {N})")
    n_hi = math.floor(s_max * N)
    if n_hi > N_MAX:
        raise CapacityError(f"floor(s_max N) = {n_hi} exceeds 2^62")
    pq = _alpha_pq(alpha)
    if pq is not None:
        ns = kernels.ns_hitting_bucket(k, grid.N, 0, n_hi, pq[0], pq[1], False)
    else:
        ns = kernels.floatpow_ns_hitting_bucket(k, grid.N, 0, n_hi, float(alpha))
    return ProcessSample(ns / N, param="s")


def void_fraction(B: IntervalUnion, N: int, alpha=HALF, threads: int = 1) -> float:
    """Fraction of buckets receiving no n with n/N in B (one streaming pass)."""
    grid = PartitionGrid(N)
    pq = _alpha_pq(alpha)
    ranges = B.n_ranges(N)
    if max(hi for _, hi in ranges) > N_MAX:
        raise CapacityError("interval upper end exceeds the 2^62 integer range")
    if pq is None:
        los = np.array([a for a, _ in ranges], dtype=np.int64)
        his = np.array([b for _, b in ranges], dtype=np.int64)
        marks = kernels.floatpow_hit_buckets(grid.N, los, his, float(alpha))
        return 1.0 - int(marks.sum()) / N
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        from .seqstats import _split_range

        chunks = [c for lo, hi in ranges for c in _split_range(lo, hi, threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futs = [
                pool.submit(
                    kernels.hit_buckets, grid.N,
                    np.array([a], dtype=np.int64), np.array([b], dtype=np.int64),
                    pq[0], pq[1],
                )
                for a, b in chunks
            ]
            marks = np.zeros(N, dtype=np.uint8)
            for f in futs:
                marks |= f.result()
    else:
        los = np.array([a for a, _ in ranges], dtype=np.int64)
        his = np.array([b for _, b in ranges], dtype=np.int64)
        marks = kernels.hit_buckets(grid.N, los, his, pq[0], pq[1])
    return 1.0 - int(marks.sum()) / N


def increment_moments(
    a: float, b: float, N: int, alpha=HALF, squares_removed: bool = False,
    threads: int = 1,
) -> tuple[float, float]:
    """Mean and second moment over buckets of the count increment on (a, b]."""
    if not (0 <= a < b):
        raise ValueError(f"need 0 <= a < b, got ({a!r}, {b!r})")
    grid = PartitionGrid(N)
    lo, hi = math.floor(a * N), math.floor(b * N)
    if hi > N_MAX:
        raise CapacityError(f"floor(bN) = {hi} exceeds 2^62")
    counts = _bucket_counts_ranged(grid.N, [(lo, hi)], alpha, squares_removed, threads)[0]
    mean = int(counts.sum()) / N
    second = int((counts * counts).sum()) / N
    return mean, second


def nonindependence_fractions(N: int, alpha=HALF):
    """Empirical version of the dependent-increments demonstration.

    Conditioning on buckets that receive exactly one n with n/N in [16, 25)
    (the middle strip of the cone picture), measures how often such a bucket
    also receives some n with n/N in [1, 16) or [25, 81).  Returns
    (conditional_fraction, n_conditioned, unconditional_fraction).
    """
    grid = PartitionGrid(N)
    pq = _alpha_pq(alpha)
    if pq is None:
        raise ValueError(f"needs alpha = p/q with q in (2, 3), got {alpha!r}")
    p, q = pq
    if 81 * N > N_MAX:
        raise CapacityError("81 N exceeds the 2^62 integer range")
    mid = kernels.range_bucket_counts(
        grid.N, np.array([16 * N - 1], dtype=np.int64),
        np.array([25 * N - 1], dtype=np.int64), p, q, False,
    )[0]
    # n in [1, 16N) union [25N, 81N), written as integer (lo, hi] ranges
    outer = kernels.hit_buckets(
        grid.N,
        np.array([0, 25 * N - 1], dtype=np.int64),
        np.array([16 * N - 1, 81 * N - 1], dtype=np.int64),
        p, q,
    )
    cond = mid == 1
    n_cond = int(cond.sum())
    hit = outer.astype(bool)
    conditional = float(hit[cond].mean()) if n_cond else float("nan")
    unconditional = float(hit.mean())
    return conditional, n_cond, unconditional
