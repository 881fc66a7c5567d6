"""Shared oracles and generators for the test suite.

brute_count is the independent counting oracle: a plain double loop over a
fixed integer window with the region's own membership test, no basis
reduction or box pull-back involved.
"""
import numpy as np
import pytest

from pigeonstats.affine import GroupElement, multiply, n_of, phi, u_of
from pigeonstats.lattice import AffineLattice


def brute_count(L: AffineLattice, region, radius: int = 40) -> int:
    """Count lattice points in region by scanning |m1|, |m2| <= radius."""
    ms = np.arange(-radius, radius + 1)
    m1, m2 = np.meshgrid(ms, ms, indexing="ij")
    pts = np.stack([m1.ravel(), m2.ravel()], axis=1) @ L.basis + L.tau
    return sum(1 for x, y in pts if region.contains(x, y))


def random_group_element(rng) -> GroupElement:
    """A generic, moderately sheared element built from the named families."""
    g = n_of(rng.uniform(-1, 1))
    g = multiply(g, phi(rng.uniform(-1.5, 1.5)))
    g = multiply(g, u_of(rng.uniform(-1, 1)))
    return multiply(g, GroupElement(1, 0, 0, 1, rng.uniform(-2, 2), rng.uniform(-2, 2)))


GAMMA_GENERATORS = [
    GroupElement(0, -1, 1, 0),
    GroupElement(1, 1, 0, 1),
    GroupElement(1, 0, 0, 1, 1, 0),
    GroupElement(1, 0, 0, 1, 0, 1),
]


def random_gamma(rng, length: int = 6) -> GroupElement:
    """Random word in the integer subgroup generators (and inverses)."""
    from pigeonstats.affine import identity, inverse

    g = identity()
    for _ in range(length):
        h = GAMMA_GENERATORS[rng.integers(len(GAMMA_GENERATORS))]
        if rng.random() < 0.5:
            h = inverse(h)
        g = multiply(g, h)
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
