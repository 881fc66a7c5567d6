"""Arithmetic in the affine special linear group of the plane.

Elements are pairs (M, x) of a unimodular 2x2 matrix and a row translation
vector, multiplying as (M, x)(M', x') = (MM', xM' + x').  Plane vectors are
rows throughout the package, so a lattice point is m @ M + x.

All operations are pure functions on immutable values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

DET_TOL = 1e-9


@dataclass(frozen=True)
class GroupElement:
    """One element (M, x): matrix entries row-major, then the translation."""

    a: float
    b: float
    c: float
    d: float
    x1: float = 0.0
    x2: float = 0.0

    def __post_init__(self) -> None:
        vals = (self.a, self.b, self.c, self.d, self.x1, self.x2)
        if not all(math.isfinite(v) for v in vals):
            raise OverflowError(f"non-finite group element: {vals}")
        if abs(self.det() - 1.0) > DET_TOL:
            raise ValueError(f"matrix part is not unimodular: det = {self.det()!r}")

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def translation(self):
        return (self.x1, self.x2)


IDENTITY = GroupElement(1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


def identity() -> GroupElement:
    return IDENTITY


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    """(M, x)(M', x') = (MM', xM' + x') in the row-vector convention."""
    a = g.a * h.a + g.b * h.c
    b = g.a * h.b + g.b * h.d
    c = g.c * h.a + g.d * h.c
    d = g.c * h.b + g.d * h.d
    x1 = g.x1 * h.a + g.x2 * h.c + h.x1
    x2 = g.x1 * h.b + g.x2 * h.d + h.x2
    return GroupElement(a, b, c, d, x1, x2)


def inverse(g: GroupElement) -> GroupElement:
    """(M, x)^-1 = (M^-1, -x M^-1)."""
    det = g.det()
    a, b = g.d / det, -g.b / det
    c, d = -g.c / det, g.a / det
    x1 = -(g.x1 * a + g.x2 * c)
    x2 = -(g.x1 * b + g.x2 * d)
    return GroupElement(a, b, c, d, x1, x2)


def phi(t: float) -> GroupElement:
    """Diagonal flow diag(e^(-t/2), e^(t/2)) with zero translation."""
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    e = math.exp(-t / 2.0)
    if e == 0.0 or not math.isfinite(1.0 / e):
        raise OverflowError(f"exp({t / 2.0}) overflows double precision")
    return GroupElement(e, 0.0, 0.0, 1.0 / e, 0.0, 0.0)


def a_of(N: float) -> GroupElement:
    """Expansion element diag(N^(-1/2), N^(1/2)), i.e. phi(log N)."""
    if not (N > 0 and math.isfinite(N)):
        raise ValueError(f"N must be a positive real, got {N!r}")
    return phi(math.log(N))


def n_of(t: float) -> GroupElement:
    """The nonlinear section point ((1, 2t; 0, 1), (t, t^2))."""
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    return GroupElement(1.0, 2.0 * t, 0.0, 1.0, t, t * t)


def u_of(t: float) -> GroupElement:
    """Pure shear ((1, 2t; 0, 1), (0, 0)); a one-parameter subgroup."""
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    return GroupElement(1.0, 2.0 * t, 0.0, 1.0, 0.0, 0.0)


def translation(x1: float, x2: float) -> GroupElement:
    """Pure translation (I, (x1, x2))."""
    return GroupElement(1.0, 0.0, 0.0, 1.0, x1, x2)


def sigma(section, t: float) -> GroupElement:
    """Section point ((1, 2t; 0, 1), (x(t), y(t))) for a horocycle section.

    `section` supplies callables x_fn and y_fn (see
    :class:`pigeonstats.horocycle.HorocycleSectionSpec`).
    """
    x = float(section.x_fn(t))
    y = float(section.y_fn(t))
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"section evaluated to non-finite point at t={t!r}")
    return GroupElement(1.0, 2.0 * t, 0.0, 1.0, x, y)
