"""Pure numpy implementations of the hot kernels.

Selected at import time when the compiled extension is unavailable (or when
CEILINGWKB_FORCE_FALLBACK is set).  Semantics must match
``ceilingwkb._kernels._core`` exactly; ``tests/test_kernels.py`` enforces this.

The kernels all revolve around exact shooting: a candidate path is a parabola
q(tau) = tau^2 + 2 p0 tau + y0 reflected at most once off the ceiling q = 0,
and the scan looks for initial data whose arrival q(t) matches the target x.
"""
from __future__ import annotations

import math

import numpy as np

TYPE_I_BIT = 1
TYPE_II_BIT = 2
TYPE_III_BIT = 4
BOUNCE_BIT = 8

_CHUNK = 65536


def propagate_arrival(y0, p0, t):
    """Arrival position q(t) and bounce flag for exact single-reflection motion.

    Array-friendly over y0/p0 (t scalar or broadcastable).
    """
    y0 = np.asarray(y0, dtype=float)
    p0 = np.asarray(p0, dtype=float)
    t = np.asarray(t, dtype=float)
    free = t * t + 2.0 * p0 * t + y0
    disc = p0 * p0 - y0
    hits = (p0 < 0.0) & (disc >= 0.0)
    sq = np.sqrt(np.where(hits, disc, 0.0))
    b = -p0 - sq
    bounced = hits & (b < t)
    pb = b + p0  # momentum at the ceiling (<= 0)
    refl = (t - b) ** 2 - 2.0 * pb * (t - b)
    arrival = np.where(bounced, refl, free)
    return arrival, bounced


def _scan_range_position(y, x, t):
    lo = -(x / (2.0 * t) + (x + y) / (2.0 * t) + t + math.sqrt(y) + 5.0)
    hi = (x + y) / (2.0 * t) + t + 5.0
    return lo, hi


def _scan_range_momentum(p, x, t):
    return 0.0, x + t * t + 2.0 * abs(p) * t + p * p + 5.0


def _bisect_scalar(err, lo, hi, tol):
    flo = err(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = err(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_roots(err, lo, hi, n_scan, tol):
    grid = np.linspace(lo, hi, n_scan)
    vals = np.array([err(g) for g in grid])
    roots = []
    for i in range(n_scan - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(grid[i])
        elif (a < 0.0) != (b < 0.0):
            roots.append(_bisect_scalar(err, grid[i], grid[i + 1], tol))
    if vals[-1] == 0.0:
        roots.append(grid[-1])
    return roots


def shoot_position_scalar(y, x, t, n_scan=256, tol=1e-13):
    """All initial momenta whose exact path from y arrives at x at time t.

    Returns a list of (p0, bounced) pairs, sorted by p0.
    """

    def err(p0):
        arrival, _ = propagate_arrival(y, p0, t)
        return float(arrival) - x

    lo, hi = _scan_range_position(y, x, t)
    roots = _scan_roots(err, lo, hi, n_scan, tol * max(1.0, hi - lo))
    out = []
    for p0 in roots:
        _, bounced = propagate_arrival(y, p0, t)
        out.append((float(p0), bool(bounced)))
    return out


def shoot_momentum_scalar(p, x, t, n_scan=256, tol=1e-13):
    """All initial positions whose exact path with momentum p arrives at x at t.

    Returns a list of (y0, bounced) pairs, sorted by y0.
    """

    def err(y0):
        arrival, _ = propagate_arrival(y0, p, t)
        return float(arrival) - x

    lo, hi = _scan_range_momentum(p, x, t)
    roots = _scan_roots(err, lo, hi, n_scan, tol * max(1.0, hi - lo))
    out = []
    for y0 in roots:
        _, bounced = propagate_arrival(y0, p, t)
        out.append((float(y0), bool(bounced)))
    return out


def _classify_bits_position(p0, bounced, t):
    if bounced:
        return BOUNCE_BIT
    if p0 >= 0.0:
        return TYPE_I_BIT
    return TYPE_II_BIT if -p0 >= t else TYPE_III_BIT


def _classify_bits_momentum(p, bounced, t):
    if bounced:
        return BOUNCE_BIT
    if p >= 0.0:
        return TYPE_I_BIT
    return TYPE_II_BIT if -p >= t else TYPE_III_BIT


def _bitmask_grid(axis_lo, axis_hi, fixed, ts, target, n_scan, momentum_mode):
    """Vectorized scan-and-bisect over a chunk of grid points.

    ``fixed`` is y (position mode) or p (momentum mode); the scanned variable is
    the complementary initial datum.  At most two admissible roots exist, so two
    bracket slots per point suffice.
    """
    n = fixed.shape[0]
    mask = np.zeros(n, dtype=np.uint8)
    u = np.linspace(0.0, 1.0, n_scan)

    span = axis_hi - axis_lo
    cand = axis_lo[:, None] + span[:, None] * u[None, :]
    if momentum_mode:
        arrival, _ = propagate_arrival(cand, fixed[:, None], ts[:, None])
    else:
        arrival, _ = propagate_arrival(fixed[:, None], cand, ts[:, None])
    err = arrival - target[:, None]
    sign = err < 0.0
    change = sign[:, :-1] != sign[:, 1:]

    for slot in range(2):
        has = change.any(axis=1)
        if not has.any():
            break
        idx = np.argmax(change, axis=1)
        change[np.arange(n), idx] = False  # consume this bracket
        lo = cand[np.arange(n), idx]
        hi = cand[np.arange(n), idx + 1]
        flo = err[np.arange(n), idx]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if momentum_mode:
                am, _ = propagate_arrival(mid, fixed, ts)
            else:
                am, _ = propagate_arrival(fixed, mid, ts)
            fm = am - target
            take_lo = (flo < 0.0) == (fm < 0.0)
            lo = np.where(take_lo, mid, lo)
            flo = np.where(take_lo, fm, flo)
            hi = np.where(take_lo, hi, mid)
        root = 0.5 * (lo + hi)
        if momentum_mode:
            _, bounced = propagate_arrival(root, fixed, ts)
            p0_at_root = fixed
        else:
            _, bounced = propagate_arrival(fixed, root, ts)
            p0_at_root = root
        bits = np.where(
            bounced, BOUNCE_BIT,
            np.where(p0_at_root >= 0.0, TYPE_I_BIT,
                     np.where(-p0_at_root >= ts, TYPE_II_BIT, TYPE_III_BIT)),
        ).astype(np.uint8)
        mask[has] |= bits[has]
    return mask


def position_bitmask_grid(ys, xs, ts, n_scan=128):
    """Shooting-oracle branch bitmask for arrays of (y, x, t) triples."""
    ys = np.ascontiguousarray(ys, dtype=float)
    xs = np.ascontiguousarray(xs, dtype=float)
    ts = np.ascontiguousarray(ts, dtype=float)
    out = np.zeros(ys.shape[0], dtype=np.uint8)
    for s in range(0, ys.shape[0], _CHUNK):
        sl = slice(s, min(s + _CHUNK, ys.shape[0]))
        y, x, t = ys[sl], xs[sl], ts[sl]
        lo = -(x / (2.0 * t) + (x + y) / (2.0 * t) + t + np.sqrt(y) + 5.0)
        hi = (x + y) / (2.0 * t) + t + 5.0
        out[sl] = _bitmask_grid(lo, hi, y, t, x, n_scan, momentum_mode=False)
    return out


def momentum_bitmask_grid(ps, xs, ts, n_scan=128):
    """Shooting-oracle branch bitmask for arrays of (p, x, t) triples."""
    ps = np.ascontiguousarray(ps, dtype=float)
    xs = np.ascontiguousarray(xs, dtype=float)
    ts = np.ascontiguousarray(ts, dtype=float)
    out = np.zeros(ps.shape[0], dtype=np.uint8)
    for s in range(0, ps.shape[0], _CHUNK):
        sl = slice(s, min(s + _CHUNK, ps.shape[0]))
        p, x, t = ps[sl], xs[sl], ts[sl]
        lo = np.zeros_like(p)
        hi = x + t * t + 2.0 * np.abs(p) * t + p * p + 5.0
        out[sl] = _bitmask_grid(lo, hi, p, t, x, n_scan, momentum_mode=True)
    return out
