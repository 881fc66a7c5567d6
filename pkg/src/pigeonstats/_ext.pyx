# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the pure numpy kernels in _pure.py.

Semantics must match _pure.py bit for bit: same reduction, same candidate
padding, same boundary comparisons.  tests/test_kernels.py enforces agreement.
"""
import numpy as np

from .errors import CapacityError, SingularLatticeError

from libc.math cimport sqrt, cbrt, floor, ceil, fabs, fmod, nearbyint, pow as cpow, llrint

DEFAULT_CAP = 10**8


cdef inline int _reduce4(double* b) nogil:
    cdef double n1, n2, mu, t0, t1
    cdef int it
    n1 = b[0] * b[0] + b[1] * b[1]
    n2 = b[2] * b[2] + b[3] * b[3]
    for it in range(64):
        if n2 < n1:
            t0 = b[0]; t1 = b[1]
            b[0] = b[2]; b[1] = b[3]
            b[2] = t0; b[3] = t1
            t0 = n1; n1 = n2; n2 = t0
        if n1 < 1e-30:
            return -1
        mu = nearbyint((b[0] * b[2] + b[1] * b[3]) / n1)
        if mu == 0:
            break
        b[2] -= mu * b[0]
        b[3] -= mu * b[1]
        n2 = b[2] * b[2] + b[3] * b[3]
    return 0


cdef inline int _ranges(double* b, double t1, double t2,
                        double x0, double x1, double y0, double y1,
                        long long cap,
                        long long* a1, long long* c1,
                        long long* a2, long long* c2) nogil:
    """Reduce b in place and compute the integer candidate box; 0 on success,
    -1 singular basis, -2 capacity exceeded."""
    cdef double det, i11, i12, i21, i22
    cdef double m1lo = 0, m1hi = 0, m2lo = 0, m2hi = 0, m1, m2, dx, dy
    cdef double pad1, pad2, am
    cdef double cx[4]
    cdef double cy[4]
    cdef long long total
    cdef int ci
    if _reduce4(b) != 0:
        return -1
    det = b[0] * b[3] - b[1] * b[2]
    i11 = b[3] / det; i12 = -b[1] / det
    i21 = -b[2] / det; i22 = b[0] / det
    cx[0] = x0; cy[0] = y0
    cx[1] = x0; cy[1] = y1
    cx[2] = x1; cy[2] = y0
    cx[3] = x1; cy[3] = y1
    for ci in range(4):
        dx = cx[ci] - t1; dy = cy[ci] - t2
        m1 = dx * i11 + dy * i21
        m2 = dx * i12 + dy * i22
        if ci == 0:
            m1lo = m1; m1hi = m1; m2lo = m2; m2hi = m2
        else:
            if m1 < m1lo: m1lo = m1
            if m1 > m1hi: m1hi = m1
            if m2 < m2lo: m2lo = m2
            if m2 > m2hi: m2hi = m2
    am = fabs(m1lo)
    if fabs(m1hi) > am: am = fabs(m1hi)
    pad1 = 1e-8 + 1e-12 * am
    am = fabs(m2lo)
    if fabs(m2hi) > am: am = fabs(m2hi)
    pad2 = 1e-8 + 1e-12 * am
    a1[0] = <long long>ceil(m1lo - pad1)
    c1[0] = <long long>floor(m1hi + pad1)
    a2[0] = <long long>ceil(m2lo - pad2)
    c2[0] = <long long>floor(m2hi + pad2)
    if c1[0] < a1[0] or c2[0] < a2[0]:
        c1[0] = a1[0] - 1
        c2[0] = a2[0] - 1
        return 0
    total = (c1[0] - a1[0] + 1) * (c2[0] - a2[0] + 1)
    if total > cap:
        return -2
    return 0


cdef inline void _raise_status(int status, long long sample):
    if status == -1:
        raise SingularLatticeError(f"singular basis in sample {sample}")
    if status == -2:
        raise CapacityError(
            f"candidate grid for sample {sample} exceeds the enumeration cap"
        )


def cone_range_counts(double[:, ::1] B, double[:, ::1] T,
                      double[::1] lo, double[::1] hi,
                      const unsigned char[::1] lo_closed,
                      const unsigned char[::1] hi_closed,
                      long long cap=DEFAULT_CAP):
    cdef Py_ssize_t n = B.shape[0], k = lo.shape[0], i, j
    out = np.zeros((n, k), dtype=np.int32)
    cdef int[:, ::1] o = out
    cdef double xlo, xhi, px, py, t1, t2
    cdef double b[4]
    cdef long long a1, c1, a2, c2, m1, m2, bad = -1
    cdef int status = 0, okx
    xlo = lo[0]; xhi = hi[0]
    for j in range(k):
        if lo[j] < xlo: xlo = lo[j]
        if hi[j] > xhi: xhi = hi[j]
    with nogil:
        for i in range(n):
            b[0] = B[i, 0]; b[1] = B[i, 1]; b[2] = B[i, 2]; b[3] = B[i, 3]
            t1 = T[i, 0]; t2 = T[i, 1]
            status = _ranges(b, t1, t2, xlo, xhi, -xhi, xhi, cap,
                             &a1, &c1, &a2, &c2)
            if status != 0:
                bad = i
                break
            for m1 in range(a1, c1 + 1):
                for m2 in range(a2, c2 + 1):
                    px = m1 * b[0] + m2 * b[2] + t1
                    py = m1 * b[1] + m2 * b[3] + t2
                    if fabs(py) <= px:
                        for j in range(k):
                            if lo_closed[j]:
                                okx = px >= lo[j]
                            else:
                                okx = px > lo[j]
                            if okx:
                                if hi_closed[j]:
                                    okx = px <= hi[j]
                                else:
                                    okx = px < hi[j]
                            if okx:
                                o[i, j] += 1
    if bad >= 0:
        _raise_status(status, bad)
    return out


def approx_counts(double[:, ::1] B, double[:, ::1] T,
                  double eps, double delta, double sqrt_s,
                  long long cap=DEFAULT_CAP):
    cdef Py_ssize_t n = B.shape[0], i
    out = np.zeros(n, dtype=np.int32)
    cdef int[::1] o = out
    cdef double x0 = -eps, x1 = sqrt_s + eps, ymax, bx0, px, py, z, t1, t2
    cdef double b[4]
    cdef long long a1, c1, a2, c2, m1, m2, bad = -1
    cdef int status = 0
    ymax = fabs(x0)
    if fabs(x1) > ymax: ymax = fabs(x1)
    ymax += fabs(delta)
    bx0 = x0 if x0 < 0.0 else 0.0
    with nogil:
        for i in range(n):
            b[0] = B[i, 0]; b[1] = B[i, 1]; b[2] = B[i, 2]; b[3] = B[i, 3]
            t1 = T[i, 0]; t2 = T[i, 1]
            status = _ranges(b, t1, t2, bx0, x1, -ymax, ymax, cap,
                             &a1, &c1, &a2, &c2)
            if status != 0:
                bad = i
                break
            for m1 in range(a1, c1 + 1):
                for m2 in range(a2, c2 + 1):
                    px = m1 * b[0] + m2 * b[2] + t1
                    if px <= x0 or px > x1:
                        continue
                    py = m1 * b[1] + m2 * b[3] + t2
                    z = py + delta
                    if px > 0:
                        if z > -px and z <= px:
                            o[i] += 1
                    elif px < 0:
                        if z >= px and z < -px:
                            o[i] += 1
    if bad >= 0:
        _raise_status(status, bad)
    return out


def rect_counts(double[:, ::1] B, double[:, ::1] T,
                double x0, double x1, double y0, double y1,
                long long cap=DEFAULT_CAP):
    cdef Py_ssize_t n = B.shape[0], i
    out = np.zeros(n, dtype=np.int32)
    cdef int[::1] o = out
    cdef double px, py, t1, t2
    cdef double b[4]
    cdef long long a1, c1, a2, c2, m1, m2, bad = -1
    cdef int status = 0
    with nogil:
        for i in range(n):
            b[0] = B[i, 0]; b[1] = B[i, 1]; b[2] = B[i, 2]; b[3] = B[i, 3]
            t1 = T[i, 0]; t2 = T[i, 1]
            status = _ranges(b, t1, t2, x0, x1, y0, y1, cap,
                             &a1, &c1, &a2, &c2)
            if status != 0:
                bad = i
                break
            for m1 in range(a1, c1 + 1):
                for m2 in range(a2, c2 + 1):
                    px = m1 * b[0] + m2 * b[2] + t1
                    if px < x0 or px > x1:
                        continue
                    py = m1 * b[1] + m2 * b[3] + t2
                    if py >= y0 and py <= y1:
                        o[i] += 1
    if bad >= 0:
        _raise_status(status, bad)
    return out


def near_edge_counts(double[:, ::1] B, double[:, ::1] T,
                     double horizon, double tol,
                     long long cap=DEFAULT_CAP):
    cdef Py_ssize_t n = B.shape[0], i
    out = np.zeros(n, dtype=np.int32)
    cdef int[::1] o = out
    cdef double px, py, t1, t2
    cdef double b[4]
    cdef long long a1, c1, a2, c2, m1, m2, bad = -1
    cdef int status = 0
    with nogil:
        for i in range(n):
            b[0] = B[i, 0]; b[1] = B[i, 1]; b[2] = B[i, 2]; b[3] = B[i, 3]
            t1 = T[i, 0]; t2 = T[i, 1]
            status = _ranges(b, t1, t2, 0.0, horizon,
                             -horizon - tol, horizon + tol, cap,
                             &a1, &c1, &a2, &c2)
            if status != 0:
                bad = i
                break
            for m1 in range(a1, c1 + 1):
                for m2 in range(a2, c2 + 1):
                    px = m1 * b[0] + m2 * b[2] + t1
                    if px < 0.0 or px > horizon:
                        continue
                    py = m1 * b[1] + m2 * b[3] + t2
                    if fabs(fabs(py) - px) <= tol:
                        o[i] += 1
    if bad >= 0:
        _raise_status(status, bad)
    return out


cdef inline double _frac_powq(long long m, int q, long long* exact) nogil:
    """Fractional part of m**(1/q), q in (2, 3); sets exact to 1 on perfect powers."""
    cdef double t, frac
    cdef long long r
    cdef int it
    exact[0] = 0
    if q == 2:
        t = sqrt(<double>m)
        r = <long long>floor(t)
        for it in range(2):
            if r * r > m:
                r -= 1
            if (r + 1) * (r + 1) <= m:
                r += 1
        if r * r == m:
            exact[0] = 1
            return 0.0
        return (<double>(m - r * r)) / (t + <double>r)
    else:
        t = cbrt(<double>m)
        r = <long long>floor(t)
        for it in range(2):
            if r * r * r > m:
                r -= 1
            if (r + 1) * (r + 1) * (r + 1) <= m:
                r += 1
        if r * r * r == m:
            exact[0] = 1
            return 0.0
        return (<double>(m - r * r * r)) / (t * t + t * <double>r + <double>(r * r))


def powq_bucket_counts(long long N, long long n_lo, long long n_hi,
                       int p, int q, bint remove_powers):
    counts = np.zeros(N, dtype=np.int64)
    cdef long long[::1] c = counts
    cdef long long n, m, kk, exact
    cdef double frac
    with nogil:
        for n in range(n_lo + 1, n_hi + 1):
            m = n if p == 1 else n * n
            frac = _frac_powq(m, q, &exact)
            if exact and remove_powers:
                continue
            kk = <long long>floor(frac * N + 0.5)
            if kk >= N:
                kk -= N
            c[kk] += 1
    return counts


def floatpow_bucket_counts(long long N, long long n_lo, long long n_hi,
                           double alpha, int remove_q):
    counts = np.zeros(N, dtype=np.int64)
    cdef long long[::1] c = counts
    cdef long long n, kk, r, rq
    cdef int it
    cdef double frac
    with nogil:
        for n in range(n_lo + 1, n_hi + 1):
            frac = fmod(cpow(<double>n, alpha), 1.0)
            if remove_q > 0:
                r = llrint(cpow(<double>n, 1.0 / remove_q))
                rq = r
                for it in range(remove_q - 1):
                    rq = rq * r
                if rq == n:
                    continue
            kk = <long long>floor(frac * N + 0.5)
            if kk >= N:
                kk -= N
            c[kk] += 1
    return counts


def range_bucket_counts(long long N, long long[::1] n_los, long long[::1] n_his,
                        int p, int q, bint remove_powers):
    cdef Py_ssize_t nr = n_los.shape[0], r
    out = np.zeros((nr, N), dtype=np.int64)
    cdef long long[:, ::1] c = out
    cdef long long n, m, kk, exact
    cdef double frac
    with nogil:
        for r in range(nr):
            for n in range(n_los[r] + 1, n_his[r] + 1):
                m = n if p == 1 else n * n
                frac = _frac_powq(m, q, &exact)
                if exact and remove_powers:
                    continue
                kk = <long long>floor(frac * N + 0.5)
                if kk >= N:
                    kk -= N
                c[r, kk] += 1
    return out


def hit_buckets(long long N, long long[::1] n_los, long long[::1] n_his,
                int p, int q):
    marks = np.zeros(N, dtype=np.uint8)
    cdef unsigned char[::1] mk = marks
    cdef Py_ssize_t nr = n_los.shape[0], r
    cdef long long n, m, kk, exact
    cdef double frac
    with nogil:
        for r in range(nr):
            for n in range(n_los[r] + 1, n_his[r] + 1):
                m = n if p == 1 else n * n
                frac = _frac_powq(m, q, &exact)
                kk = <long long>floor(frac * N + 0.5)
                if kk >= N:
                    kk -= N
                mk[kk] = 1
    return marks


def ns_hitting_bucket(long long bucket, long long N, long long n_lo, long long n_hi,
                      int p, int q, bint remove_powers):
    cdef long long n, m, kk, exact, total = 0, pos = 0
    cdef double frac
    with nogil:
        for n in range(n_lo + 1, n_hi + 1):
            m = n if p == 1 else n * n
            frac = _frac_powq(m, q, &exact)
            if exact and remove_powers:
                continue
            kk = <long long>floor(frac * N + 0.5)
            if kk >= N:
                kk -= N
            if kk == bucket:
                total += 1
    out = np.empty(total, dtype=np.int64)
    cdef long long[::1] o = out
    with nogil:
        for n in range(n_lo + 1, n_hi + 1):
            m = n if p == 1 else n * n
            frac = _frac_powq(m, q, &exact)
            if exact and remove_powers:
                continue
            kk = <long long>floor(frac * N + 0.5)
            if kk >= N:
                kk -= N
            if kk == bucket:
                o[pos] = n
                pos += 1
    return out
