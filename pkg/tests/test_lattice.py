import math

import numpy as np
import pytest

from conftest import brute_count, random_gamma, random_group_element
from pigeonstats import mc
from pigeonstats.affine import a_of, multiply, n_of
from pigeonstats.errors import CapacityError, SingularLatticeError
from pigeonstats.kernels import near_edge_counts
from pigeonstats.lattice import (
    AffineLattice,
    ApproxRegion,
    Rectangle,
    RegionUnion,
    Triangle,
    TriangleDifferenceUnion,
    canonicalize,
    count_in_region,
    enumerate_points,
    from_group_element,
    integer_lattice,
    jump_points,
    reconstruct,
    sample_haar,
    sample_lattice_batch,
)

Z2 = integer_lattice()


def random_region(rng):
    kind = rng.integers(3)
    if kind == 0:
        return Triangle(float(rng.uniform(0.1, 4.0)))
    if kind == 1:
        x0 = rng.uniform(-2, 1)
        y0 = rng.uniform(-2, 1)
        return Rectangle(x0, x0 + rng.uniform(0.2, 2.0), y0, y0 + rng.uniform(0.2, 2.0))
    a = float(rng.uniform(0.0, 2.0))
    return TriangleDifferenceUnion(((a, a + float(rng.uniform(0.2, 2.0))),))


def test_from_group_element_examples():
    L = from_group_element(multiply(n_of(1.0), a_of(4.0)))
    assert np.allclose(L.basis, [[0.5, 4.0], [0.0, 2.0]], atol=1e-12)
    assert np.allclose(L.tau, [0.5, 2.0], atol=1e-12)


def test_gamma_invariance_single_example(rng):
    from pigeonstats.affine import GroupElement

    g = multiply(n_of(0.37), a_of(5.0))
    # integer matrix (1,1;0,1) with integer translation (3,-2)
    gamma = GroupElement(1, 1, 0, 1, 3, -2)
    L, Lg = from_group_element(g), from_group_element(multiply(gamma, g))
    for _ in range(100):
        r = random_region(rng)
        assert count_in_region(L, r) == count_in_region(Lg, r)


def test_gamma_invariance_generators(rng):
    for _ in range(60):
        g = random_group_element(rng)
        gam = random_gamma(rng)
        L = from_group_element(g)
        Lg = from_group_element(multiply(gam, g))
        for _ in range(4):
            r = random_region(rng)
            assert count_in_region(L, r) == count_in_region(Lg, r)


def test_count_triangle_examples():
    assert count_in_region(Z2, Triangle(4.0)) == 9
    assert count_in_region(Z2, Triangle(0.25)) == 1
    assert count_in_region(Z2, Rectangle(0, 2, -2, 2)) == 15


def test_counts_against_brute_force(rng):
    for _ in range(60):
        L = from_group_element(random_group_element(rng))
        r = random_region(rng)
        assert count_in_region(L, r) == brute_count(L, r)


def test_count_additivity(rng):
    for _ in range(40):
        L = from_group_element(random_group_element(rng))
        a = float(rng.uniform(0.1, 1.5))
        s = a + float(rng.uniform(0.1, 2.0))
        whole = count_in_region(L, Triangle(s))
        part = count_in_region(L, Triangle(a))
        diff = count_in_region(L, TriangleDifferenceUnion(((a, s),)))
        assert whole == part + diff


def test_approx_region_area():
    assert ApproxRegion(0.01, -0.001, 1.0).area() == pytest.approx(1.01**2 + 1e-4)
    assert ApproxRegion(-0.01, 0.001, 1.0).area() == pytest.approx(0.99**2 - 1e-4)


def test_region_union_generic_path(rng):
    u = RegionUnion((Triangle(1.0), Rectangle(-1, -0.2, 0, 1)))
    for _ in range(20):
        L = from_group_element(random_group_element(rng))
        assert count_in_region(L, u) == brute_count(L, u)


def test_enumerate_points_grid():
    pts, ms = enumerate_points(Z2, (0, 2, -2, 2))
    assert len(pts) == 15
    assert np.array_equal(ms @ Z2.basis + Z2.tau, pts)


def test_enumerate_triangle_oracle():
    # brute force over |m| <= 10 delivers the 9 expected points of T(4)
    pts, _ = enumerate_points(Z2, Triangle(4.0).bbox())
    inside = {(x, y) for x, y in map(tuple, pts) if Triangle(4.0).contains(x, y)}
    expected = {(0, 0), (1, -1), (1, 0), (1, 1), (2, -2), (2, -1), (2, 0), (2, 1), (2, 2)}
    assert inside == {(float(a), float(b)) for a, b in expected}


def test_enumerate_capacity():
    with pytest.raises(CapacityError):
        enumerate_points(Z2, (0, 1e6, 0, 1e6), cap=10**6)


def test_representation_independence(rng):
    for _ in range(200):
        L = from_group_element(random_group_element(rng))
        c = canonicalize(L)
        r = random_region(rng)
        assert count_in_region(L, r) == count_in_region(c.lattice, r)


def test_canonicalize_square_lattice():
    c = canonicalize(Z2)
    assert c.z == (0.0, 1.0)
    assert c.theta == 0.0
    assert c.w == (0.0, 0.0)


def test_canonicalize_integer_shear():
    L = AffineLattice(np.array([[1.0, 0.0], [5.0, 1.0]]), np.zeros(2))
    c = canonicalize(L)
    assert c.z[0] == pytest.approx(0.0, abs=1e-12)
    assert c.z[1] == pytest.approx(1.0, abs=1e-12)


def test_canonicalize_idempotent(rng):
    for _ in range(1000):
        g = random_gamma(rng)
        L = from_group_element(
            multiply(g, multiply(n_of(rng.uniform(-3, 3)), a_of(rng.uniform(0.2, 5))))
        )
        c1 = canonicalize(L)
        c2 = canonicalize(reconstruct(c1.z, c1.theta, c1.w))
        assert abs(c1.z[0] - c2.z[0]) <= 1e-9
        assert abs(c1.z[1] - c2.z[1]) <= 1e-9
        assert abs(c1.theta - c2.theta) <= 1e-9
        for d in (abs(c1.w[0] - c2.w[0]), abs(c1.w[1] - c2.w[1])):
            assert min(d, 1.0 - d) <= 1e-9  # torus distance


def test_canonicalize_rejects_singular():
    with pytest.raises((SingularLatticeError, ValueError)):
        AffineLattice(np.array([[1.0, 0.0], [1.0, 1e-15]]), np.zeros(2))


def test_jump_points_square_lattice():
    ps = jump_points(Z2, 2.5)
    # cone columns x = 0, 1, 2 carry 1, 3, 5 points; atoms sit at the
    # x-coordinates (square-root parametrization)
    assert np.array_equal(ps.atoms, [0, 1, 1, 1, 2, 2, 2, 2, 2])
    assert ps.param == "sqrt_s"
    in_s = ps.to_param("s")
    assert np.array_equal(in_s.atoms, [0, 1, 1, 1, 4, 4, 4, 4, 4])


def test_jump_points_restriction(rng):
    L = from_group_element(random_group_element(rng))
    full = jump_points(L, 3.0)
    assert np.array_equal(full.restrict(1.7).atoms, jump_points(L, 1.7).atoms)


def test_jump_count_matches_triangle(rng):
    for _ in range(50):
        L = from_group_element(random_group_element(rng))
        s = float(rng.uniform(0.2, 5.0))
        assert len(jump_points(L, math.sqrt(s))) == count_in_region(L, Triangle(s))


def test_siegel_identity_fixed_regions():
    regions = [
        (Triangle(0.5), 0.5),
        (Triangle(1.0), 1.0),
        (Triangle(5.0), 5.0),
        (Rectangle(0, 1, 0, 1), 1.0),
        (ApproxRegion(0.01, -0.001, 1.0), ApproxRegion(0.01, -0.001, 1.0).area()),
    ]
    n = 10**6
    for region, area in regions:
        counts = mc.sample_region_counts(region, n, seed=99)
        m = counts.mean()
        se = counts.std(ddof=1) / math.sqrt(n)
        assert abs(m - area) <= 3 * se, (region, m, area, se)


def test_mean_count_rectangle_6():
    counts = mc.sample_region_counts(Rectangle(0, 2, 0, 3), 10**6, seed=101)
    se = counts.std(ddof=1) / 1000.0
    assert abs(counts.mean() - 6.0) <= 3 * se


def test_acceptance_rate_stable_across_seeds():
    r1 = mc.acceptance_rate(10**5, seed=1)
    r2 = mc.acceptance_rate(10**5, seed=2)
    assert abs(r1 - r2) <= 0.01
    # analytic value: hyperbolic area pi/3 over strip mass 2/sqrt(3)
    assert abs(r1 - math.pi * math.sqrt(3) / 6.0) <= 0.01


def test_simplicity_no_mass_near_cone_edges():
    rng = np.random.default_rng(7)
    n = 10**6
    B, T = sample_lattice_batch(rng, n)
    hits = near_edge_counts(B, T, 3.0, 1e-9)
    assert int((hits > 0).sum()) == 0


def test_intensity_in_area_parameter():
    for (a, b) in ((0.0, 1.0), (2.0, 5.0)):
        est = mc.estimate_intensity(a, b, 2 * 10**5, seed=31)
        assert abs(est.value - (b - a)) <= 3 * est.std_error


def test_jump_points_mean_in_sqrt_parameter():
    # mean number of atoms of jump_points in (a, b] is b^2 - a^2: atoms in
    # (1, 1.5] correspond to the triangle difference over (1, 2.25] in area
    n = 2 * 10**5
    counts = mc.sample_region_counts(
        TriangleDifferenceUnion(((1.0**2, 1.5**2),)), n, seed=12
    )
    m = counts.mean()
    se = counts.std(ddof=1) / math.sqrt(n)
    assert abs(m - (1.5**2 - 1.0**2)) <= 3 * se


def test_haar_sample_roundtrip(rng):
    s = sample_haar(rng)
    assert abs(s.z[0]) <= 0.5
    assert s.z[0] ** 2 + s.z[1] ** 2 >= 1 - 1e-12
    c = canonicalize(s.lattice)
    assert c.z[0] == pytest.approx(s.z[0], abs=1e-9)
    assert c.z[1] == pytest.approx(s.z[1], abs=1e-9)


def test_canonicalize_corner_conventions():
    # a basis built exactly at the corner x = 1/2, |z| = 1 must land on the
    # x <= 0 side of the domain under the fixed boundary conventions
    from pigeonstats.lattice import assemble_basis

    z = (0.5, math.sqrt(3.0) / 2.0)
    L = AffineLattice(assemble_basis(z[0], z[1], 0.0), np.zeros(2))
    c = canonicalize(L)
    assert -0.5 - 1e-12 <= c.z[0] <= 0.0 + 1e-12
    assert c.z[0] ** 2 + c.z[1] ** 2 >= 1.0 - 1e-12
    assert 0.0 <= c.theta < math.pi
    # same point set either way
    for s in (0.7, 1.3, 3.1):
        assert count_in_region(L, Triangle(s)) == count_in_region(c.lattice, Triangle(s))


def test_canonicalize_theta_halved():
    # rotating a basis by pi gives the same lattice; theta stays in [0, pi)
    from pigeonstats.lattice import assemble_basis

    b = assemble_basis(0.1, 1.4, 2.5)  # 2.5 < pi, survives as-is
    c1 = canonicalize(AffineLattice(b, np.zeros(2)))
    c2 = canonicalize(AffineLattice(-b, np.zeros(2)))
    assert c1.theta == pytest.approx(c2.theta, abs=1e-12)
    assert 0.0 <= c1.theta < math.pi
