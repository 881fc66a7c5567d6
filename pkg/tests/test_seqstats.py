import math
from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp

from pigeonstats.errors import CapacityError
from pigeonstats.seqstats import (
    bucket_of,
    frac_pow,
    frac_sqrt,
    histogram,
)

mp.dps = 50


def mp_frac_pow(n, p, q):
    return float(mp.power(n, mp.mpf(p) / q) % 1)


def test_frac_sqrt_examples():
    assert frac_sqrt(4) == 0.0
    assert frac_sqrt(2) == pytest.approx(math.sqrt(2) - 1, abs=1e-12)
    assert abs(frac_sqrt(10**8 + 1) - mp_frac_pow(10**8 + 1, 1, 2)) <= 1e-11


def test_frac_sqrt_random_against_mpmath(rng):
    for n in rng.integers(1, 10**14, size=100):
        n = int(n)
        assert abs(frac_sqrt(n) - mp_frac_pow(n, 1, 2)) <= 1e-11


def test_frac_sqrt_domain():
    with pytest.raises(ValueError):
        frac_sqrt(0)
    with pytest.raises(ValueError):
        frac_sqrt(2**63)


def test_frac_pow_examples():
    assert frac_pow(8, Fraction(1, 3)) == 0.0
    assert frac_pow(2, Fraction(1, 2)) == frac_sqrt(2)
    assert abs(frac_pow(5, Fraction(2, 3)) - mp_frac_pow(5, 2, 3)) <= 1e-10


def test_frac_pow_random_oracle(rng):
    for _ in range(60):
        n = int(rng.integers(2, 10**6))
        p, q = [(1, 2), (1, 3), (2, 3), (2, 5), (3, 7)][rng.integers(5)]
        assert abs(frac_pow(n, Fraction(p, q)) - mp_frac_pow(n, p, q)) <= 1e-10


def test_frac_pow_float_path():
    assert frac_pow(10, 0.31) == pytest.approx(mp_frac_pow(10, 31, 100), abs=1e-12)


def test_frac_pow_domain():
    with pytest.raises(ValueError):
        frac_pow(5, Fraction(3, 2))
    with pytest.raises(ValueError):
        frac_pow(5, 1.0)


def test_bucket_of_examples():
    assert bucket_of(0.0, 10) == 0
    assert bucket_of(0.95, 10) == 0  # wraps around the circle
    assert bucket_of(0.25, 10) == 3  # left edge of bucket 3


def test_bucket_totality(rng):
    N = 97
    xs = rng.random(10**6)
    ks = np.floor(xs * N + 0.5).astype(np.int64) % N
    # direct interval membership: x in [k/N - 1/(2N), k/N + 1/(2N)) mod 1
    centers = ks / N
    d = (xs - centers + 0.5) % 1.0 - 0.5
    assert np.all((d >= -0.5 / N) & (d < 0.5 / N))
    for x in rng.random(1000):
        assert bucket_of(float(x), N) == int(np.floor(x * N + 0.5)) % N


def test_histogram_hand_case():
    h = histogram(5, 1.0)
    assert h.counts.tolist() == [2, 1, 1, 0, 1]
    ej, tail = h.proportions(2)
    assert ej.tolist() == [0.2, 0.6, 0.2]
    assert tail == 0.0


def test_histogram_zero_s():
    h = histogram(7, 0.0)
    assert h.counts.tolist() == [0] * 7
    ej, tail = h.proportions(3)
    assert ej.tolist() == [1.0, 0.0, 0.0, 0.0]
    assert tail == 0.0
    assert h.second_moment() == 0.0


def test_histogram_conservation():
    N, s = 10**4, 1.7
    h = histogram(N, s)
    assert h.n_points == math.floor(s * N)
    hr = histogram(N, s, squares_removed=True)
    assert hr.n_points == math.floor(s * N) - math.isqrt(math.floor(s * N))


def test_histogram_conservation_cubes():
    N, s = 10**4, 1.0
    h = histogram(N, s, alpha=Fraction(1, 3), squares_removed=True)
    cubes = sum(1 for m in range(1, N + 1) if m**3 <= N)
    assert h.n_points == N - cubes


def test_histogram_monotone_in_s():
    N = 500
    prev = histogram(N, 0.3).counts
    for s in (0.7, 1.0, 2.3):
        cur = histogram(N, s).counts
        assert np.all(cur >= prev)
        prev = cur


def test_histogram_matches_scalar_functions():
    N, s = 257, 2.0
    h = histogram(N, s, alpha=Fraction(2, 3))
    counts = np.zeros(N, dtype=np.int64)
    for n in range(1, math.floor(s * N) + 1):
        counts[bucket_of(frac_pow(n, Fraction(2, 3)), N)] += 1
    assert np.array_equal(h.counts, counts)


def test_histogram_float_alpha_close_to_rational():
    N = 10**4
    exact = histogram(N, 1.0, alpha=Fraction(1, 3))
    approx = histogram(N, 1.0, alpha=1.0 / 3.0)
    # double pow may misplace a handful of near-boundary points
    assert np.abs(exact.counts - approx.counts).sum() <= 10


def test_proportions_partition():
    h = histogram(10**4, 1.3)
    ej, tail = h.proportions(5)
    assert abs(ej.sum() + tail - 1.0) <= 1e-12


def test_second_moment_poissonish_for_cbrt():
    h = histogram(10**6, 1.0, alpha=Fraction(1, 3))
    ej, _ = h.proportions(4)
    for j in range(5):
        assert abs(ej[j] - math.exp(-1) / math.factorial(j)) <= 0.01


def test_threads_bit_identical():
    a = histogram(10**4, 2.0, threads=1)
    b = histogram(10**4, 2.0, threads=3)
    assert np.array_equal(a.counts, b.counts)


def test_capacity_errors():
    with pytest.raises(CapacityError):
        histogram(10**9, 1.0)
    with pytest.raises(ValueError):
        histogram(100, -1.0)
    with pytest.raises(ValueError):
        histogram(100, 1.0, alpha=Fraction(5, 4))


def test_sandwich_bounds_small():
    # exact window form of the two-sided lattice-count bounds, N = 100
    from pigeonstats.affine import a_of, multiply, n_of
    from pigeonstats.lattice import ApproxRegion, count_in_region, from_group_element

    for s in (0.5, 1.0, 2.0):
        N = 100
        h = histogram(N, s)
        Np = math.floor(s * N)
        eps = 1 / (2 * N * math.sqrt(Np)) + abs(math.sqrt(Np) / math.sqrt(N) - math.sqrt(s))
        delta = 1 / (4 * N * math.sqrt(N))
        for k in range(1, N):
            L = from_group_element(multiply(n_of(k / N), a_of(N)))
            lo = count_in_region(L, ApproxRegion(-eps, delta, s))
            hi = count_in_region(L, ApproxRegion(+eps, delta, s))
            assert lo <= h.counts[k] <= hi, (s, k, lo, int(h.counts[k]), hi)


from hypothesis import given, settings
from hypothesis import strategies as st


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=2**62))
def test_frac_sqrt_range_and_reconstruction(n):
    f = frac_sqrt(n)
    assert 0.0 <= f < 1.0
    r = math.isqrt(n)
    # (r + f)^2 reconstructs n to double precision
    assert (r + f) ** 2 == pytest.approx(n, rel=4e-15)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
       st.integers(min_value=1, max_value=10**6))
def test_bucket_of_is_total_and_in_range(x, N):
    k = bucket_of(x, N)
    assert 0 <= k < N
    # exact rational check that x lies in bucket k's half-open window
    # (floats are exact binary rationals, so boundary hits are decidable)
    d = Fraction(x) - Fraction(k, N)
    d = (d + Fraction(1, 2)) % 1 - Fraction(1, 2)
    assert -Fraction(1, 2 * N) <= d < Fraction(1, 2 * N)
