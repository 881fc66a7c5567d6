"""Equidistribution harness for rational points on expanded horocycle sections.

nu_N(f) averages f over the pN lattices built from section points k/N pushed
by the expansion element of parameter M (with M comparable to N); for
non-linear sections this converges to the Haar integral.  Test functions are
bounded lattice-count statistics so the averages reduce to batched counting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import lattice as lat
from .affine import a_of, multiply, sigma
from .errors import CapacityError
from .mc import McEstimate

SAMPLE_CAP = 10**7


@dataclass(frozen=True)
class HorocycleSectionSpec:
    """A closed section t -> ((1, 2t; 0, 1), (x(t), y(t))) of integer period.

    Periodicity and non-linearity are declared by the caller, not detected.
    """

    x_fn: Callable[[float], float]
    y_fn: Callable[[float], float]
    period: int
    label: str
    declared_nonlinear: bool

    def __post_init__(self):
        if not (isinstance(self.period, int) and self.period >= 1):
            raise ValueError(f"period must be a positive integer, got {self.period!r}")


SQRT_SECTION = HorocycleSectionSpec(
    x_fn=lambda t: t, y_fn=lambda t: t * t, period=1,
    label="sqrt", declared_nonlinear=True,
)

LINEAR_SECTION = HorocycleSectionSpec(
    x_fn=lambda t: 0.0, y_fn=lambda t: t, period=1,
    label="linear", declared_nonlinear=False,
)


def polynomial_section(x_coeffs, y_coeffs, period: int = 1,
                       label: str = "poly") -> HorocycleSectionSpec:
    """Section with polynomial x(t), y(t) given by ascending coefficients."""
    xc = tuple(float(c) for c in x_coeffs)
    yc = tuple(float(c) for c in y_coeffs)

    def horner(coeffs):
        def f(t):
            acc = 0.0
            for c in reversed(coeffs):
                acc = acc * t + c
            return acc

        return f

    nonlinear = len([c for c in yc[2:] if c != 0.0]) > 0
    return HorocycleSectionSpec(horner(xc), horner(yc), period, label, nonlinear)


# ---------------------------------------------------------------------------
# Test functions


@dataclass(frozen=True)
class IndicatorCountEquals:
    """1 if the lattice meets the region in exactly j points, else 0."""

    region: object
    j: int


@dataclass(frozen=True)
class TruncatedCount:
    """min(count in region, cap); bounded by construction."""

    region: object
    cap: int


@dataclass(frozen=True)
class ConstantFn:
    value: float


@dataclass(frozen=True)
class CustomFn:
    """Arbitrary bounded f(lattice); evaluated one lattice at a time."""

    fn: Callable[[lat.AffineLattice], float]


def sample_point(spec: HorocycleSectionSpec, k: int, N: int, M: float) -> lat.AffineLattice:
    """The lattice of sigma(k/N) a(M)."""
    if not 0 <= k < spec.period * N:
        raise ValueError(f"k must lie in [0, {spec.period * N}), got {k}")
    return lat.from_group_element(multiply(sigma(spec, k / N), a_of(M)))


def _section_batch(spec: HorocycleSectionSpec, ks: np.ndarray, N: int, M: float):
    """(n, 4) bases and (n, 2) taus of sigma(k/N) a(M) for k in ks.

    Entry expressions replicate the group-product path bit for bit: at M = N
    some section lattices carry points exactly on the cone edge, and a one-ulp
    assembly difference would flip their membership.
    """
    t = ks / N
    em = math.exp(-math.log(M) / 2.0)
    ep = 1.0 / em
    n = ks.size
    B = np.empty((n, 4))
    B[:, 0] = em
    B[:, 1] = (2.0 * t) * ep
    B[:, 2] = 0.0
    B[:, 3] = ep
    xs = np.array([spec.x_fn(v) for v in t], dtype=np.float64)
    ys = np.array([spec.y_fn(v) for v in t], dtype=np.float64)
    T = np.empty((n, 2))
    T[:, 0] = xs * em
    T[:, 1] = ys * ep
    return B, T


def nu_N(f, spec: HorocycleSectionSpec, N: int, M: Optional[float] = None,
         threads: int = 1) -> float:
    """Exact average of f over the pN section lattices at expansion M (default N)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    M = float(N) if M is None else float(M)
    if not M > 0:
        raise ValueError(f"M must be positive, got {M!r}")
    total = spec.period * N
    if total > SAMPLE_CAP:
        raise CapacityError(f"pN = {total} exceeds the sample cap {SAMPLE_CAP}")
    if isinstance(f, ConstantFn):
        return f.value
    if isinstance(f, CustomFn):
        acc = 0.0
        for k in range(total):
            acc += f.fn(sample_point(spec, k, N, M))
        return acc / total
    ks = np.arange(total, dtype=np.float64)
    B, T = _section_batch(spec, ks, N, M)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        edges = np.linspace(0, total, threads + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(
                    lambda ab: lat.count_batch(B[ab[0]:ab[1]], T[ab[0]:ab[1]], f.region),
                    zip(edges, edges[1:]),
                )
            )
        counts = np.concatenate(parts)
    else:
        counts = lat.count_batch(B, T, f.region)
    if isinstance(f, IndicatorCountEquals):
        return int(np.count_nonzero(counts == f.j)) / total
    if isinstance(f, TruncatedCount):
        return int(np.minimum(counts, f.cap).sum()) / total
    raise TypeError(f"unsupported test function {f!r}")


def convergence_table(f, spec: HorocycleSectionSpec, N_list, reference: McEstimate,
                      M_ratio: float = 1.0, threads: int = 1):
    """Rows (N, M, nu_N(f), reference, |difference|); reporting only."""
    rows = []
    for N in N_list:
        M = max(1.0, M_ratio * N)
        val = nu_N(f, spec, N, M, threads)
        rows.append((N, M, val, reference.value, abs(val - reference.value)))
    return rows
