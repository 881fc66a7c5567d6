"""Monte Carlo estimates of the limit quantities over Haar-random lattices.

Sampling is chunked (fixed chunk size, independent per-chunk generators keyed
by [seed, chunk_index]), so every estimate is a deterministic function of
(seed, n_samples) regardless of thread count.  All statistics reduce to
integer accumulators over lattice counts, which keeps reruns byte-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lattice
from .errors import ConditioningStarvedError
from .process import IntervalUnion

DEFAULT_SEED = 1729
CHUNK = 1 << 16

# Planar x-ranges [lo, hi) of the three cone strips in the dependent-increments
# demonstration: middle strip, then the inner and outer companions.
STRIP_MID = (4.0, 5.0)
STRIP_INNER = (0.0, 4.0)
STRIP_OUTER = (5.0, 9.0)


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n_samples: int
    seed: int

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError("negative standard error")


def _chunks(n_samples: int):
    out = []
    done = 0
    idx = 0
    while done < n_samples:
        size = min(CHUNK, n_samples - done)
        out.append((idx, size))
        done += size
        idx += 1
    return out


def _map_chunks(fn, n_samples: int, seed: int, threads: int = 1):
    """fn(rng, size) per chunk; results concatenated in chunk order."""
    specs = _chunks(n_samples)

    def run(spec):
        idx, size = spec
        rng = np.random.default_rng([seed, idx])
        return fn(rng, size)

    if threads <= 1 or len(specs) == 1:
        parts = [run(s) for s in specs]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, specs))
    return np.concatenate(parts)


def sample_region_counts(region, n_samples: int, seed: int = DEFAULT_SEED,
                         threads: int = 1) -> np.ndarray:
    """Per-sample lattice counts in `region` over Haar-random lattices."""

    def fn(rng, size):
        B, T = lattice.sample_lattice_batch(rng, size)
        return lattice.count_batch(B, T, region)

    return _map_chunks(fn, n_samples, seed, threads)


def _binomial(hits: int, n: int, seed: int) -> McEstimate:
    p = hits / n
    se = math.sqrt(p * (1.0 - p) / n)
    return McEstimate(p, se, n, seed)


def _mean_se(values: np.ndarray, seed: int) -> McEstimate:
    n = values.size
    mean = float(values.mean())
    sd = float(values.std(ddof=1)) if n > 1 else 0.0
    return McEstimate(mean, sd / math.sqrt(n), n, seed)


def estimate_Ej(s: float, j_max: int = 16, n_samples: int = 10**6,
                seed: int = DEFAULT_SEED, threads: int = 1):
    """E_j(s) for j = 0..j_max plus the tail mass, as McEstimates.

    E_j(s) is the Haar probability of exactly j lattice points in the closed
    area-s triangle; binomial standard errors.
    """
    counts = sample_region_counts(lattice.Triangle(s), n_samples, seed, threads)
    freq = np.bincount(np.minimum(counts, j_max + 1), minlength=j_max + 2)
    ests = [_binomial(int(freq[j]), n_samples, seed) for j in range(j_max + 1)]
    tail = _binomial(int(freq[j_max + 1]), n_samples, seed)
    return ests, tail


def estimate_void(B: IntervalUnion, n_samples: int = 10**6,
                  seed: int = DEFAULT_SEED, threads: int = 1) -> McEstimate:
    """Haar probability of zero lattice points in the union of triangle
    differences matched to the s-parameter intervals of B."""
    region = lattice.TriangleDifferenceUnion(B.intervals)
    counts = sample_region_counts(region, n_samples, seed, threads)
    return _binomial(int(np.count_nonzero(counts == 0)), n_samples, seed)


def estimate_intensity(a: float, b: float, n_samples: int = 10**6,
                       seed: int = DEFAULT_SEED, threads: int = 1) -> McEstimate:
    """Mean lattice count in T(b) minus T(a); the limit value is b - a."""
    if not (0 <= a < b):
        raise ValueError(f"need 0 <= a < b, got ({a!r}, {b!r})")
    region = lattice.TriangleDifferenceUnion(((a, b),))
    counts = sample_region_counts(region, n_samples, seed, threads)
    return _mean_se(counts.astype(np.float64), seed)


def estimate_count_moments(s: float, n_samples: int = 10**6,
                           seed: int = DEFAULT_SEED, threads: int = 1):
    """(mean, second moment) of the triangle count; limits are s and s^2 + s."""
    counts = sample_region_counts(lattice.Triangle(s), n_samples, seed, threads)
    c = counts.astype(np.float64)
    return _mean_se(c, seed), _mean_se(c * c, seed)


def minkowski_demo(n_samples: int = 10**6, seed: int = DEFAULT_SEED,
                   threads: int = 1, min_conditioned: int = 1):
    """Dependent-increments demonstration on the cone strips.

    Conditioning event: exactly one lattice point with x in [4, 5).  Among
    conditioned samples, a companion point with x in [0, 4) or [5, 9) exists
    with probability one (a radius 2/sqrt(pi) disc around any lattice point
    of a unimodular affine lattice holds a second point); unconditionally the
    companion event has probability strictly below one.
    """
    if n_samples < 10**4:
        raise ValueError("n_samples must be at least 10^4")
    strips = (STRIP_MID, STRIP_INNER, STRIP_OUTER)

    def fn(rng, size):
        B, T = lattice.sample_lattice_batch(rng, size)
        return lattice.cone_strip_counts(B, T, strips)

    counts = _map_chunks(fn, n_samples, seed, threads).reshape(-1, 3)
    conditioned = counts[:, 0] == 1
    n_cond = int(conditioned.sum())
    if n_cond < max(1, min_conditioned):
        raise ConditioningStarvedError(
            f"only {n_cond} samples (of {n_samples}) hit the conditioning event"
        )
    companion = (counts[:, 1] + counts[:, 2]) >= 1
    conditional = _binomial(int(np.count_nonzero(companion & conditioned)), n_cond, seed)
    unconditional = _binomial(int(np.count_nonzero(companion)), n_samples, seed)
    return conditional, unconditional


def acceptance_rate(n_samples: int = 10**5, seed: int = DEFAULT_SEED) -> float:
    """Empirical acceptance rate of the fundamental-domain rejection sampler."""
    rng = np.random.default_rng([seed, 0])
    _, _, rate = lattice.sample_lattice_batch(rng, n_samples, return_stats=True)
    return rate
