"""Pure numpy implementations of the hot kernels.

The compiled extension (_ext.pyx) mirrors these semantics exactly: same
Lagrange-Gauss reduction, same candidate-box padding, same half-open boundary
comparisons.  Keep the two in sync; tests/test_kernels.py checks agreement.

Counting kernels take a batch of lattices as a (n, 4) row-major basis array
[b11, b12, b21, b22] plus (n, 2) translations.  Lattice points are
(m1, m2) @ [[b11, b12], [b21, b22]] + t, m integer.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import CapacityError, SingularLatticeError

DEFAULT_CAP = 10**8
_CHUNK = 1 << 20


def reduce_rows(b11, b12, b21, b22):
    """Lagrange-Gauss reduction of the two basis rows (point set unchanged)."""
    n1 = b11 * b11 + b12 * b12
    n2 = b21 * b21 + b22 * b22
    for _ in range(64):
        if n2 < n1:
            b11, b12, b21, b22 = b21, b22, b11, b12
            n1, n2 = n2, n1
        if n1 < 1e-30:
            raise SingularLatticeError("basis row collapsed during reduction")
        mu = round((b11 * b21 + b12 * b22) / n1)
        if mu == 0:
            break
        b21 -= mu * b11
        b22 -= mu * b12
        n2 = b21 * b21 + b22 * b22
    return b11, b12, b21, b22


def _candidate_points(b11, b12, b21, b22, t1, t2, x0, x1, y0, y1, cap):
    """All lattice points in a padded integer preimage of the box [x0,x1]x[y0,y1].

    Returns (px, py) arrays covering every lattice point inside the box
    (plus nearby extras that the caller's membership test filters out).
    """
    b11, b12, b21, b22 = reduce_rows(b11, b12, b21, b22)
    det = b11 * b22 - b12 * b21
    i11, i12 = b22 / det, -b12 / det
    i21, i22 = -b21 / det, b11 / det
    m1lo = m1hi = m2lo = m2hi = None
    for cx, cy in ((x0, y0), (x0, y1), (x1, y0), (x1, y1)):
        dx, dy = cx - t1, cy - t2
        m1 = dx * i11 + dy * i21
        m2 = dx * i12 + dy * i22
        m1lo = m1 if m1lo is None else min(m1lo, m1)
        m1hi = m1 if m1hi is None else max(m1hi, m1)
        m2lo = m2 if m2lo is None else min(m2lo, m2)
        m2hi = m2 if m2hi is None else max(m2hi, m2)
    pad1 = 1e-8 + 1e-12 * max(abs(m1lo), abs(m1hi))
    pad2 = 1e-8 + 1e-12 * max(abs(m2lo), abs(m2hi))
    a1 = math.ceil(m1lo - pad1)
    c1 = math.floor(m1hi + pad1)
    a2 = math.ceil(m2lo - pad2)
    c2 = math.floor(m2hi + pad2)
    if c1 < a1 or c2 < a2:
        z = np.empty(0)
        return z, z
    total = (c1 - a1 + 1) * (c2 - a2 + 1)
    if total > cap:
        raise CapacityError(
            f"candidate grid of {total} integer points exceeds cap {cap}"
        )
    m1 = np.arange(a1, c1 + 1, dtype=np.float64)[:, None]
    m2 = np.arange(a2, c2 + 1, dtype=np.float64)[None, :]
    px = (m1 * b11 + m2 * b21 + t1).ravel()
    py = (m1 * b12 + m2 * b22 + t2).ravel()
    return px, py


def cone_range_counts(B, T, lo, hi, lo_closed, hi_closed, cap=DEFAULT_CAP):
    """Per-lattice counts of points with |y| <= x and x in each given range.

    lo/hi are the x-ranges; *_closed flags pick [lo, ...] vs (lo, ...] and
    [..., hi] vs [..., hi).  Returns int32 of shape (n, k).
    """
    B = np.ascontiguousarray(B, dtype=np.float64)
    T = np.ascontiguousarray(T, dtype=np.float64)
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    n, k = B.shape[0], lo.shape[0]
    xlo = float(lo.min())
    xhi = float(hi.max())
    out = np.zeros((n, k), dtype=np.int32)
    for i in range(n):
        px, py = _candidate_points(
            B[i, 0], B[i, 1], B[i, 2], B[i, 3], T[i, 0], T[i, 1],
            xlo, xhi, -xhi, xhi, cap,
        )
        if px.size == 0:
            continue
        cone = np.abs(py) <= px
        for j in range(k):
            m = (px >= lo[j]) if lo_closed[j] else (px > lo[j])
            m &= (px <= hi[j]) if hi_closed[j] else (px < hi[j])
            out[i, j] = np.count_nonzero(m & cone)
    return out


def approx_counts(B, T, eps, delta, sqrt_s, cap=DEFAULT_CAP):
    """Counts in the perturbed triangle: x in (-eps, sqrt_s+eps], (y+delta)/x in (-1, 1].

    Membership is evaluated multiplicatively (no division): for x > 0 it is
    -x < y+delta <= x, for x < 0 it is x <= y+delta < -x; x = 0 is excluded.
    """
    B = np.ascontiguousarray(B, dtype=np.float64)
    T = np.ascontiguousarray(T, dtype=np.float64)
    n = B.shape[0]
    x0, x1 = -eps, sqrt_s + eps
    ymax = max(abs(x0), abs(x1)) + abs(delta)
    out = np.zeros(n, dtype=np.int32)
    for i in range(n):
        px, py = _candidate_points(
            B[i, 0], B[i, 1], B[i, 2], B[i, 3], T[i, 0], T[i, 1],
            min(x0, 0.0), x1, -ymax, ymax, cap,
        )
        if px.size == 0:
            continue
        z = py + delta
        inside_x = (px > x0) & (px <= x1)
        pos = inside_x & (px > 0) & (z > -px) & (z <= px)
        neg = inside_x & (px < 0) & (z >= px) & (z < -px)
        out[i] = np.count_nonzero(pos | neg)
    return out


def rect_counts(B, T, x0, x1, y0, y1, cap=DEFAULT_CAP):
    """Counts in the closed box [x0, x1] x [y0, y1]."""
    B = np.ascontiguousarray(B, dtype=np.float64)
    T = np.ascontiguousarray(T, dtype=np.float64)
    n = B.shape[0]
    out = np.zeros(n, dtype=np.int32)
    for i in range(n):
        px, py = _candidate_points(
            B[i, 0], B[i, 1], B[i, 2], B[i, 3], T[i, 0], T[i, 1],
            x0, x1, y0, y1, cap,
        )
        if px.size == 0:
            continue
        out[i] = np.count_nonzero(
            (px >= x0) & (px <= x1) & (py >= y0) & (py <= y1)
        )
    return out


def near_edge_counts(B, T, horizon, tol, cap=DEFAULT_CAP):
    """Counts of points with 0 <= x <= horizon lying within tol of |y| = x."""
    B = np.ascontiguousarray(B, dtype=np.float64)
    T = np.ascontiguousarray(T, dtype=np.float64)
    n = B.shape[0]
    out = np.zeros(n, dtype=np.int32)
    for i in range(n):
        px, py = _candidate_points(
            B[i, 0], B[i, 1], B[i, 2], B[i, 3], T[i, 0], T[i, 1],
            0.0, horizon, -horizon - tol, horizon + tol, cap,
        )
        if px.size == 0:
            continue
        out[i] = np.count_nonzero(
            (px >= 0.0)
            & (px <= horizon)
            & (np.abs(np.abs(py) - px) <= tol)
        )
    return out


def _frac_and_exact(m, q):
    """Fractional part of m**(1/q) for int64 m >= 1, plus exact-power mask."""
    if q == 2:
        t = np.sqrt(m.astype(np.float64))
        r = np.floor(t).astype(np.int64)
        for _ in range(2):
            r = np.where(r * r > m, r - 1, r)
            r = np.where((r + 1) * (r + 1) <= m, r + 1, r)
        exact = r * r == m
        frac = np.where(exact, 0.0, (m - r * r) / (t + r))
    elif q == 3:
        t = np.cbrt(m.astype(np.float64))
        r = np.floor(t).astype(np.int64)
        for _ in range(2):
            r = np.where(r * r * r > m, r - 1, r)
            r = np.where((r + 1) * (r + 1) * (r + 1) <= m, r + 1, r)
        exact = r * r * r == m
        frac = np.where(exact, 0.0, (m - r * r * r) / (t * t + t * r + r * r))
    else:
        raise ValueError(f"exact kernels support q in (2, 3), got {q}")
    return frac, exact


def _buckets(frac, N):
    k = np.floor(frac * N + 0.5).astype(np.int64)
    k[k >= N] -= N
    return k


def powq_bucket_counts(N, n_lo, n_hi, p, q, remove_powers):
    """Bucket counts of frac(n^(p/q)) for n in (n_lo, n_hi], grid of N buckets."""
    counts = np.zeros(N, dtype=np.int64)
    for lo in range(n_lo + 1, n_hi + 1, _CHUNK):
        ns = np.arange(lo, min(lo + _CHUNK - 1, n_hi) + 1, dtype=np.int64)
        frac, exact = _frac_and_exact(ns**p, q)
        k = _buckets(frac, N)
        if remove_powers:
            k = k[~exact]
        counts += np.bincount(k, minlength=N)
    return counts


def floatpow_bucket_counts(N, n_lo, n_hi, alpha, remove_q):
    """Bucket counts of frac(n^alpha) via double pow; remove_q > 0 strips
    perfect remove_q-th powers (for rational alpha with large denominator)."""
    counts = np.zeros(N, dtype=np.int64)
    for lo in range(n_lo + 1, n_hi + 1, _CHUNK):
        ns = np.arange(lo, min(lo + _CHUNK - 1, n_hi) + 1, dtype=np.int64)
        frac = np.mod(np.power(ns.astype(np.float64), alpha), 1.0)
        if remove_q > 0:
            r = np.rint(ns.astype(np.float64) ** (1.0 / remove_q)).astype(np.int64)
            exact = r**remove_q == ns
            frac = np.where(exact, 0.0, frac)
            k = _buckets(frac, N)[~exact]
        else:
            k = _buckets(frac, N)
        counts += np.bincount(k, minlength=N)
    return counts


def range_bucket_counts(N, n_los, n_his, p, q, remove_powers):
    """Per-range bucket counts; range r covers integers in (n_los[r], n_his[r]]."""
    out = np.zeros((len(n_los), N), dtype=np.int64)
    for r, (a, b) in enumerate(zip(n_los, n_his)):
        out[r] = powq_bucket_counts(N, a, b, p, q, remove_powers)
    return out


def hit_buckets(N, n_los, n_his, p, q):
    """Mark buckets receiving at least one n from the union of (lo, hi] ranges."""
    marks = np.zeros(N, dtype=np.uint8)
    for a, b in zip(n_los, n_his):
        for lo in range(a + 1, b + 1, _CHUNK):
            ns = np.arange(lo, min(lo + _CHUNK - 1, b) + 1, dtype=np.int64)
            frac, _ = _frac_and_exact(ns**p, q)
            marks[_buckets(frac, N)] = 1
    return marks


def ns_hitting_bucket(bucket, N, n_lo, n_hi, p, q, remove_powers):
    """All n in (n_lo, n_hi] whose frac(n^(p/q)) lands in the given bucket."""
    hits = []
    for lo in range(n_lo + 1, n_hi + 1, _CHUNK):
        ns = np.arange(lo, min(lo + _CHUNK - 1, n_hi) + 1, dtype=np.int64)
        frac, exact = _frac_and_exact(ns**p, q)
        m = _buckets(frac, N) == bucket
        if remove_powers:
            m &= ~exact
        hits.append(ns[m])
    if not hits:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(hits)


def _floatpow_frac(ns, alpha):
    return np.mod(np.power(ns.astype(np.float64), alpha), 1.0)


def floatpow_ns_hitting_bucket(bucket, N, n_lo, n_hi, alpha):
    """Float-pow twin of ns_hitting_bucket for general exponents."""
    hits = []
    for lo in range(n_lo + 1, n_hi + 1, _CHUNK):
        ns = np.arange(lo, min(lo + _CHUNK - 1, n_hi) + 1, dtype=np.int64)
        m = _buckets(_floatpow_frac(ns, alpha), N) == bucket
        hits.append(ns[m])
    if not hits:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(hits)


def floatpow_hit_buckets(N, n_los, n_his, alpha):
    """Float-pow twin of hit_buckets for general exponents."""
    marks = np.zeros(N, dtype=np.uint8)
    for a, b in zip(n_los, n_his):
        for lo in range(a + 1, b + 1, _CHUNK):
            ns = np.arange(lo, min(lo + _CHUNK - 1, b) + 1, dtype=np.int64)
            marks[_buckets(_floatpow_frac(ns, alpha), N)] = 1
    return marks
