# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: exact single-reflection shooting scans.

Semantics mirror ``ceilingwkb._kernels.fallback`` exactly.
"""
from libc.math cimport sqrt, fabs

import numpy as np
cimport numpy as cnp

cnp.import_array()

TYPE_I_BIT = 1
TYPE_II_BIT = 2
TYPE_III_BIT = 4
BOUNCE_BIT = 8

cdef int _TYPE_I = 1
cdef int _TYPE_II = 2
cdef int _TYPE_III = 4
cdef int _BOUNCE = 8


cdef inline double _arrival(double y0, double p0, double t, bint* bounced) nogil:
    cdef double disc, b, pb
    bounced[0] = False
    if p0 < 0.0:
        disc = p0 * p0 - y0
        if disc >= 0.0:
            b = -p0 - sqrt(disc)
            if b < t:
                bounced[0] = True
                pb = b + p0
                return (t - b) * (t - b) - 2.0 * pb * (t - b)
    return t * t + 2.0 * p0 * t + y0


cdef inline double _err(double fixed, double cand, double t, double target,
                        bint momentum_mode, bint* bounced) nogil:
    if momentum_mode:
        return _arrival(cand, fixed, t, bounced) - target
    return _arrival(fixed, cand, t, bounced) - target


cdef inline double _bisect(double fixed, double lo, double hi, double t,
                           double target, bint momentum_mode, double tol) nogil:
    cdef double flo, fm, mid
    cdef bint dummy
    cdef int i
    flo = _err(fixed, lo, t, target, momentum_mode, &dummy)
    for i in range(200):
        mid = 0.5 * (lo + hi)
        fm = _err(fixed, mid, t, target, momentum_mode, &dummy)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (flo < 0.0) == (fm < 0.0):
            lo = mid
            flo = fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


cdef inline int _point_bitmask(double fixed, double lo, double hi, double t,
                               double target, bint momentum_mode, int n_scan,
                               double tol) nogil:
    cdef int i, mask = 0
    cdef double step = (hi - lo) / (n_scan - 1)
    cdef double prev, cur, root, p0
    cdef bint bounced
    prev = _err(fixed, lo, t, target, momentum_mode, &bounced)
    for i in range(1, n_scan):
        cur = _err(fixed, lo + step * i, t, target, momentum_mode, &bounced)
        if (prev < 0.0) != (cur < 0.0):
            root = _bisect(fixed, lo + step * (i - 1), lo + step * i, t,
                           target, momentum_mode, tol)
            _err(fixed, root, t, target, momentum_mode, &bounced)
            p0 = fixed if momentum_mode else root
            if bounced:
                mask |= _BOUNCE
            elif p0 >= 0.0:
                mask |= _TYPE_I
            elif -p0 >= t:
                mask |= _TYPE_II
            else:
                mask |= _TYPE_III
        prev = cur
    return mask


def propagate_arrival(y0, p0, t):
    """Arrival position and bounce flag; delegates to numpy broadcasting."""
    from . import fallback
    return fallback.propagate_arrival(y0, p0, t)


def shoot_position_scalar(double y, double x, double t, int n_scan=256,
                          double tol=1e-13):
    """All initial momenta whose exact path from y arrives at x at time t."""
    cdef double lo = -(x / (2.0 * t) + (x + y) / (2.0 * t) + t + sqrt(y) + 5.0)
    cdef double hi = (x + y) / (2.0 * t) + t + 5.0
    return _shoot(y, lo, hi, t, x, False, n_scan, tol)


def shoot_momentum_scalar(double p, double x, double t, int n_scan=256,
                          double tol=1e-13):
    """All initial positions whose exact path with momentum p arrives at x at t."""
    cdef double lo = 0.0
    cdef double hi = x + t * t + 2.0 * fabs(p) * t + p * p + 5.0
    return _shoot(p, lo, hi, t, x, True, n_scan, tol)


cdef list _shoot(double fixed, double lo, double hi, double t, double target,
                 bint momentum_mode, int n_scan, double tol):
    cdef list out = []
    cdef int i
    cdef double step = (hi - lo) / (n_scan - 1)
    cdef double prev, cur, root
    cdef double abstol = tol * max(1.0, hi - lo)
    cdef bint bounced
    prev = _err(fixed, lo, t, target, momentum_mode, &bounced)
    if prev == 0.0:
        _err(fixed, lo, t, target, momentum_mode, &bounced)
        out.append((lo, bool(bounced)))
    for i in range(1, n_scan):
        cur = _err(fixed, lo + step * i, t, target, momentum_mode, &bounced)
        if cur == 0.0:
            out.append((lo + step * i, bool(bounced)))
        elif (prev < 0.0) != (cur < 0.0) and prev != 0.0:
            root = _bisect(fixed, lo + step * (i - 1), lo + step * i, t,
                           target, momentum_mode, abstol)
            _err(fixed, root, t, target, momentum_mode, &bounced)
            out.append((root, bool(bounced)))
        prev = cur
    return out


def position_bitmask_grid(cnp.ndarray[cnp.float64_t, ndim=1] ys,
                          cnp.ndarray[cnp.float64_t, ndim=1] xs,
                          cnp.ndarray[cnp.float64_t, ndim=1] ts,
                          int n_scan=128):
    """Shooting-oracle branch bitmask for arrays of (y, x, t) triples."""
    cdef Py_ssize_t n = ys.shape[0], i
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(n, dtype=np.uint8)
    cdef double y, x, t, lo, hi
    with nogil:
        for i in range(n):
            y = ys[i]
            x = xs[i]
            t = ts[i]
            lo = -(x / (2.0 * t) + (x + y) / (2.0 * t) + t + sqrt(y) + 5.0)
            hi = (x + y) / (2.0 * t) + t + 5.0
            out[i] = <unsigned char> _point_bitmask(y, lo, hi, t, x, False,
                                                    n_scan, 1e-11 * (hi - lo))
    return out


def momentum_bitmask_grid(cnp.ndarray[cnp.float64_t, ndim=1] ps,
                          cnp.ndarray[cnp.float64_t, ndim=1] xs,
                          cnp.ndarray[cnp.float64_t, ndim=1] ts,
                          int n_scan=128):
    """Shooting-oracle branch bitmask for arrays of (p, x, t) triples."""
    cdef Py_ssize_t n = ps.shape[0], i
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(n, dtype=np.uint8)
    cdef double p, x, t, lo, hi
    with nogil:
        for i in range(n):
            p = ps[i]
            x = xs[i]
            t = ts[i]
            lo = 0.0
            hi = x + t * t + 2.0 * fabs(p) * t + p * p + 5.0
            out[i] = <unsigned char> _point_bitmask(p, lo, hi, t, x, True,
                                                    n_scan, 1e-11 * (hi - lo))
    return out
