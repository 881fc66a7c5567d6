"""Affine unimodular lattices, planar regions, Haar sampling, point counting.

Conventions fixed once for the whole package:

- A lattice is the planar point set {m @ basis + tau : m integer row pair};
  basis rows are the two generators, det(basis) = 1 within 1e-9.
- The cone is {(x, y): x >= 0, -x <= y <= x}.  The area-s triangle is its
  truncation to x <= sqrt(s), closed on all edges.
- The perturbed triangle used by the sandwich bounds is
  {x in (-eps, sqrt(s)+eps], (y+delta)/x in (-1, 1]}; x = 0 is excluded
  (the ratio is undefined there).
- The hyperbolic coordinate of a reduced basis lives in the standard
  fundamental domain: |x| <= 1/2, x^2 + y^2 >= 1, with x in [-1/2, 1/2) and
  the |z| = 1 boundary kept on x <= 0; the rotation angle is kept in [0, pi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .affine import GroupElement
from .errors import SamplerError, SingularLatticeError
from .process import ProcessSample

DEFAULT_CAP = kernels.DEFAULT_CAP
DET_TOL = 1e-9

_Y_MIN = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class AffineLattice:
    """Point set {m @ basis + tau}; basis rows are generators."""

    basis: np.ndarray
    tau: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.basis, dtype=np.float64).reshape(2, 2)
        t = np.asarray(self.tau, dtype=np.float64).reshape(2)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "tau", t)
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(t))):
            raise ValueError("non-finite lattice data")
        det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
        if abs(det) < 1e-12:
            raise SingularLatticeError(f"degenerate basis, det = {det!r}")
        if abs(det - 1.0) > DET_TOL:
            raise ValueError(f"basis is not unimodular: det = {det!r}")

    def flat(self) -> tuple[np.ndarray, np.ndarray]:
        """(1, 4) basis and (1, 2) tau views for the batch kernels."""
        return self.basis.reshape(1, 4), self.tau.reshape(1, 2)


def integer_lattice() -> AffineLattice:
    return AffineLattice(np.eye(2), np.zeros(2))


def from_group_element(g: GroupElement) -> AffineLattice:
    """The lattice Z^2 M + x of a group element; no canonicalization."""
    return AffineLattice(
        np.array([[g.a, g.b], [g.c, g.d]]), np.array([g.x1, g.x2])
    )


# ---------------------------------------------------------------------------
# Regions


@dataclass(frozen=True)
class Triangle:
    """Closed triangle of area s: 0 <= x <= sqrt(s), |y| <= x."""

    s: float

    def __post_init__(self):
        if not (self.s >= 0 and math.isfinite(self.s)):
            raise ValueError(f"s must be a finite non-negative real, got {self.s!r}")

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= math.sqrt(self.s) and abs(y) <= x

    def bbox(self):
        r = math.sqrt(self.s)
        return (0.0, r, -r, r)

    def area(self) -> float:
        return self.s


@dataclass(frozen=True)
class ApproxRegion:
    """Perturbed triangle: x in (-eps, sqrt(s)+eps], (y+delta)/x in (-1, 1]."""

    eps: float
    delta: float
    s: float

    def contains(self, x: float, y: float) -> bool:
        if not (-self.eps < x <= math.sqrt(self.s) + self.eps) or x == 0.0:
            return False
        z = y + self.delta
        if x > 0:
            return -x < z <= x
        return x <= z < -x

    def bbox(self):
        x0, x1 = -self.eps, math.sqrt(self.s) + self.eps
        ym = max(abs(x0), abs(x1)) + abs(self.delta)
        return (min(x0, 0.0), x1, -ym, ym)

    def area(self) -> float:
        e, r = self.eps, math.sqrt(self.s)
        if e >= 0:
            return (r + e) ** 2 + e * e
        return (r + e) ** 2 - e * e


@dataclass(frozen=True)
class Rectangle:
    """Closed axis-aligned box [x0, x1] x [y0, y1]."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 <= self.x1 and self.y0 <= self.y1):
            raise ValueError("empty rectangle")

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def bbox(self):
        return (self.x0, self.x1, self.y0, self.y1)

    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


@dataclass(frozen=True)
class TriangleDifferenceUnion:
    """Union over (a_j, b_j] of T(b_j) \\ T(a_j): x in (sqrt(a), sqrt(b)], |y| <= x.

    Intervals are in the area parameter and must be disjoint and ordered.
    """

    intervals: tuple

    def __post_init__(self):
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", iv)
        prev = 0.0
        for a, b in iv:
            if not (a >= prev and b > a):
                raise ValueError(f"intervals must satisfy 0 <= a1 < b1 <= a2 < ...: {iv}")
            prev = b

    def contains(self, x: float, y: float) -> bool:
        if abs(y) > x:
            return False
        return any(math.sqrt(a) < x <= math.sqrt(b) for a, b in self.intervals)

    def bbox(self):
        r = math.sqrt(self.intervals[-1][1])
        return (0.0, r, -r, r)

    def area(self) -> float:
        return sum(b - a for a, b in self.intervals)


@dataclass(frozen=True)
class ConeStrip:
    """Truncation of the cone to x_lo <= x < x_hi (closedness configurable)."""

    x_lo: float
    x_hi: float
    lo_closed: bool = True
    hi_closed: bool = False

    def contains(self, x: float, y: float) -> bool:
        if abs(y) > x:
            return False
        ok = x >= self.x_lo if self.lo_closed else x > self.x_lo
        return ok and (x <= self.x_hi if self.hi_closed else x < self.x_hi)

    def bbox(self):
        return (self.x_lo, self.x_hi, -self.x_hi, self.x_hi)

    def area(self) -> float:
        return self.x_hi**2 - self.x_lo**2


@dataclass(frozen=True)
class RegionUnion:
    """Union of arbitrary member regions (membership = any member)."""

    members: tuple

    def contains(self, x: float, y: float) -> bool:
        return any(m.contains(x, y) for m in self.members)

    def bbox(self):
        boxes = [m.bbox() for m in self.members]
        return (
            min(b[0] for b in boxes),
            max(b[1] for b in boxes),
            min(b[2] for b in boxes),
            max(b[3] for b in boxes),
        )


# ---------------------------------------------------------------------------
# Counting


def count_batch(B: np.ndarray, T: np.ndarray, region, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Lattice-point counts in `region` for a batch of lattices.

    B is (n, 4) row-major bases, T is (n, 2) translations.  Dispatches to a
    compiled kernel for the dedicated region kinds; generic regions fall back
    to per-lattice enumeration plus membership filtering.
    """
    B = np.ascontiguousarray(B, dtype=np.float64)
    T = np.ascontiguousarray(T, dtype=np.float64)
    if isinstance(region, Triangle):
        r = math.sqrt(region.s)
        return _cone(B, T, [(0.0, r, True, True)], cap)[:, 0]
    if isinstance(region, TriangleDifferenceUnion):
        ranges = [
            (math.sqrt(a), math.sqrt(b), False, True) for a, b in region.intervals
        ]
        return _cone(B, T, ranges, cap).sum(axis=1, dtype=np.int64).astype(np.int32)
    if isinstance(region, ConeStrip):
        rng = [(region.x_lo, region.x_hi, region.lo_closed, region.hi_closed)]
        return _cone(B, T, rng, cap)[:, 0]
    if isinstance(region, ApproxRegion):
        return kernels.approx_counts(
            B, T, region.eps, region.delta, math.sqrt(region.s), cap
        )
    if isinstance(region, Rectangle):
        return kernels.rect_counts(
            B, T, region.x0, region.x1, region.y0, region.y1, cap
        )
    out = np.zeros(B.shape[0], dtype=np.int32)
    for i in range(B.shape[0]):
        lat = AffineLattice(B[i].reshape(2, 2), T[i])
        pts, _ = enumerate_points(lat, region.bbox(), cap)
        out[i] = sum(1 for p in pts if region.contains(p[0], p[1]))
    return out


def _cone(B, T, ranges, cap):
    lo = np.array([r[0] for r in ranges], dtype=np.float64)
    hi = np.array([r[1] for r in ranges], dtype=np.float64)
    loc = np.array([r[2] for r in ranges], dtype=np.uint8)
    hic = np.array([r[3] for r in ranges], dtype=np.uint8)
    return kernels.cone_range_counts(B, T, lo, hi, loc, hic, cap)


def cone_strip_counts(B, T, strips, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Per-strip counts for [lo, hi) truncations of the cone; (n, k) int32."""
    return _cone(B, T, [(lo, hi, True, False) for lo, hi in strips], cap)


def count_in_region(L: AffineLattice, region, cap: int = DEFAULT_CAP) -> int:
    """|points of L in region|, boundary conventions exactly as the region defines."""
    B, T = L.flat()
    return int(count_batch(B, T, region, cap)[0])


def enumerate_points(L: AffineLattice, box, cap: int = DEFAULT_CAP):
    """All lattice points in the closed box (x0, x1, y0, y1), each once.

    Returns (points, ms): (k, 2) float coordinates and (k, 2) integer
    coordinates with ms @ basis + tau = points.
    """
    x0, x1, y0, y1 = box
    if not all(map(math.isfinite, (x0, x1, y0, y1))):
        raise ValueError(f"box must be finite, got {box!r}")
    px, py = _candidates_with_cap(L, x0, x1, y0, y1, cap)
    keep = (px >= x0) & (px <= x1) & (py >= y0) & (py <= y1)
    pts = np.column_stack([px[keep], py[keep]])
    inv = np.linalg.inv(L.basis)
    ms = np.rint((pts - L.tau) @ inv).astype(np.int64)
    return pts, ms


def _candidates_with_cap(L, x0, x1, y0, y1, cap):
    from ._pure import _candidate_points

    b = L.basis
    return _candidate_points(
        b[0, 0], b[0, 1], b[1, 0], b[1, 1], L.tau[0], L.tau[1], x0, x1, y0, y1, cap
    )


def jump_points(L: AffineLattice, horizon: float, cap: int = DEFAULT_CAP) -> ProcessSample:
    """Atoms of the lattice point process up to `horizon`.

    Atom positions are the x-coordinates of the cone points with x <= horizon
    (the square-root parametrization; squaring gives the area parameter at
    which the triangle count jumps).  Multiplicity is preserved exactly:
    coinciding x-coordinates yield repeated atoms.
    """
    if not (horizon > 0):
        raise ValueError(f"horizon must be positive, got {horizon!r}")
    px, py = _candidates_with_cap(L, 0.0, horizon, -horizon, horizon, cap)
    keep = (np.abs(py) <= px) & (px <= horizon)
    return ProcessSample(np.sort(px[keep]), param="sqrt_s")


# ---------------------------------------------------------------------------
# Haar measure on the space of affine lattices


@dataclass(frozen=True)
class HaarSample:
    """Fundamental-domain coordinates (z, theta, w) plus the assembled lattice."""

    z: tuple
    theta: float
    w: tuple
    lattice: AffineLattice = field(repr=False)

    def __post_init__(self):
        x, y = self.z
        if abs(x) > 0.5 + 1e-9 or x * x + y * y < 1.0 - 1e-9:
            raise ValueError(f"z = {self.z} outside the fundamental domain")


def assemble_basis(x: float, y: float, theta: float) -> np.ndarray:
    """Basis rows (1/sqrt(y))(1, 0) and (1/sqrt(y))(x, y), rotated by theta."""
    ry = math.sqrt(y)
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [[c / ry, s / ry], [x * c / ry - ry * s, x * s / ry + ry * c]]
    )


def reconstruct(z, theta, w) -> AffineLattice:
    basis = assemble_basis(z[0], z[1], theta)
    tau = np.asarray(w, dtype=np.float64) @ basis
    return AffineLattice(basis, tau)


def canonicalize(L: AffineLattice, max_iter: int = 100) -> HaarSample:
    """Fundamental-domain representative of L (same point set).

    Gauss-reduces the basis so the hyperbolic coordinate z = b2/b1 satisfies
    x in [-1/2, 1/2) and |z| >= 1 (|z| = 1 kept with x <= 0), normalizes the
    rotation angle to [0, pi) using -I in the integer group, and reduces the
    translation to the torus fiber [0, 1)^2.
    """
    b1 = L.basis[0].copy()
    b2 = L.basis[1].copy()
    for _ in range(max_iter):
        n1 = b1 @ b1
        det = b1[0] * b2[1] - b1[1] * b2[0]
        zx = (b2 @ b1) / n1
        zy = det / n1
        q = math.floor(zx + 0.5)
        if q != 0:
            b2 = b2 - q * b1
            zx -= q
        if zx * zx + zy * zy < 1.0:
            b1, b2 = b2, -b1
        else:
            break
    n1 = b1 @ b1
    det = b1[0] * b2[1] - b1[1] * b2[0]
    zx = (b2 @ b1) / n1
    zy = det / n1
    if zx * zx + zy * zy == 1.0 and zx > 0:
        b1, b2 = b2, -b1
        n1 = b1 @ b1
        det = b1[0] * b2[1] - b1[1] * b2[0]
        zx = (b2 @ b1) / n1
        zy = det / n1
        q = math.floor(zx + 0.5)
        if q != 0:
            b2 = b2 - q * b1
            zx -= q
    basis = np.array([b1, b2])
    ry = math.sqrt(zy)
    ainv = np.array([[ry, 0.0], [-zx / ry, 1.0 / ry]])
    rot = ainv @ basis
    theta = math.atan2(rot[0, 1], rot[0, 0]) % (2.0 * math.pi)
    if theta >= math.pi:
        theta -= math.pi
        basis = -basis
    w = np.mod(L.tau @ np.linalg.inv(basis), 1.0)
    lattice = reconstruct((zx, zy), theta, w)
    return HaarSample((zx, zy), theta, (w[0], w[1]), lattice)


def _sample_coords(rng, n: int, max_iter: int = 1000):
    """Fundamental-domain coordinates under normalized hyperbolic area.

    x uniform on [-1/2, 1/2); y = (sqrt(3)/2)/U pushes U uniform on (0, 1]
    to the 1/y^2 density on y >= sqrt(3)/2; proposals below the unit circle
    are rejected.  Returns (x, y, proposals_used).
    """
    x = rng.uniform(-0.5, 0.5, n)
    y = _Y_MIN / (1.0 - rng.random(n))
    proposals = n
    bad = x * x + y * y < 1.0
    it = 0
    while bad.any():
        it += 1
        if it > max_iter:
            raise SamplerError(f"rejection sampler exceeded {max_iter} rounds")
        k = int(bad.sum())
        x[bad] = rng.uniform(-0.5, 0.5, k)
        y[bad] = _Y_MIN / (1.0 - rng.random(k))
        proposals += k
        bad = x * x + y * y < 1.0
    return x, y, proposals


def sample_lattice_batch(rng, n: int, return_stats: bool = False):
    """n Haar-random lattices as kernel-ready arrays: (n, 4) bases, (n, 2) taus."""
    x, y, proposals = _sample_coords(rng, n)
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    w = rng.random((n, 2))
    ry = np.sqrt(y)
    c, s = np.cos(theta), np.sin(theta)
    B = np.empty((n, 4))
    B[:, 0] = c / ry
    B[:, 1] = s / ry
    B[:, 2] = x * c / ry - ry * s
    B[:, 3] = x * s / ry + ry * c
    T = np.empty((n, 2))
    T[:, 0] = w[:, 0] * B[:, 0] + w[:, 1] * B[:, 2]
    T[:, 1] = w[:, 0] * B[:, 1] + w[:, 1] * B[:, 3]
    if return_stats:
        return B, T, n / proposals
    return B, T


def sample_haar(rng) -> HaarSample:
    """One Haar-random point of the lattice space, with its coordinates."""
    x, y, _ = _sample_coords(rng, 1)
    theta = float(rng.uniform(0.0, 2.0 * math.pi))
    w = rng.random(2)
    z = (float(x[0]), float(y[0]))
    return HaarSample(z, theta, (float(w[0]), float(w[1])), reconstruct(z, theta, w))
