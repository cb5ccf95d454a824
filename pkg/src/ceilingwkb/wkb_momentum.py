"""WKB actions, amplitudes, and propagators for initial-momentum data.

Here the action S(p, x, t) is the generating function with dS = p(t) dx
+ q(0) dp - H dt, obtained from the position action by a Legendre transform
(adding p * q(0)).  The direct branch has constant amplitude 1/sqrt(2 pi); the
bounce branch's amplitude vanishes at b_p = -p (equivalently p = sqrt(x) - t),
which is where the caustic-like behavior has moved in this representation.
The Dirichlet propagator is again the difference direct - bounce, with the
bounce phase fixed by matching the direct branch at the ceiling x = 0.
"""
from __future__ import annotations

import math

import numpy as np

from . import classical
from .classical import PathClass
from .errors import BranchNotAdmissible, NoBouncePath
from .wkb_position import BranchFlag, PropagatorValue

AMP_DIRECT = 1.0 / math.sqrt(2.0 * math.pi)

NEAR_CRITICAL_TOL = 1e-8


# ---------------------------------------------------------------------------
# Actions


def action_direct_p(p, x, t):
    """Direct-branch action S = -t^3/3 - p t (p + t) + x (p + t) (array-friendly)."""
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    s = -(t ** 3) / 3.0 - p * t * (p + t) + x * (p + t)
    return s if s.ndim else float(s)


def action_bounce_p(p, x, t, b=None):
    """Bounce-branch action composed through the reflection.

    S = [-b^3/3 + b p^2] + [-(t-b)^3/3 + (t-b)(x + (p+b)^2)] + p q(0),
    q(0) = -b^2 - 2 p b, with b = b_p(p, x, t).  This composition satisfies the
    generating-function identities dS/dx = p(t), dS/dp = q(0), dS/dt = -H
    including the implicit b_p dependence, and agrees with the direct action at
    the ceiling x = 0.
    """
    if b is None:
        b = classical.bounce_time_momentum(p, x, t)
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    b = np.asarray(b, dtype=float)
    s1 = -(b ** 3) / 3.0 + b * p * p
    s2 = -((t - b) ** 3) / 3.0 + (t - b) * (x + (p + b) ** 2)
    s0 = p * (-b * b - 2.0 * p * b)
    out = s1 + s2 + s0
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Amplitudes


def amplitude_direct_p():
    """Constant direct-branch amplitude 1/sqrt(2 pi) (unit Jacobian dq(0)/dx)."""
    return AMP_DIRECT


def amplitude_bounce_p(p, x, t, b=None):
    """Bounce amplitude (2 pi)^(-1/2) sqrt(|p + b_p| / sqrt((p+t)^2 + 3x)).

    Zero exactly at the critical momentum (b_p = -p); positive sign so the
    bounce propagator equals the direct one at the ceiling x = 0.
    """
    if np.ndim(p) == 0 and np.ndim(x) == 0 and np.ndim(t) == 0:
        cls = classical.classify_momentum_paths(p, x, t)
        if PathClass.CRITICAL in cls:
            return 0.0
        if PathClass.BOUNCE not in cls:
            raise NoBouncePath(f"no bounce path for (p={p}, x={x}, t={t})")
    if b is None:
        b = classical.bounce_time_momentum_closed_form(p, x, t)
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    b = np.asarray(b, dtype=float)
    w = np.sqrt((p + t) ** 2 + 3.0 * x)
    out = AMP_DIRECT * np.sqrt(np.abs(p + b) / w)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Branch propagators


def propagator_direct_p(p, x, t) -> PropagatorValue:
    """Direct-branch momentum propagator; FORBIDDEN marker where inadmissible."""
    cls = classical.classify_momentum_paths(p, x, t)
    if PathClass.CRITICAL in cls:
        value = AMP_DIRECT * np.exp(1j * action_direct_p(p, x, t))
        return PropagatorValue(complex(value), BranchFlag.CRITICAL)
    if cls.direct_tag is None:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.FORBIDDEN)
    value = AMP_DIRECT * np.exp(1j * action_direct_p(p, x, t))
    return PropagatorValue(complex(value), BranchFlag.OK)


def propagator_bounce_p(p, x, t) -> PropagatorValue:
    """Bounce-branch momentum propagator; FORBIDDEN marker where inadmissible."""
    cls = classical.classify_momentum_paths(p, x, t)
    if PathClass.CRITICAL in cls:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.CRITICAL)
    if PathClass.BOUNCE not in cls:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.FORBIDDEN)
    b = classical.bounce_time_momentum_closed_form(p, x, t)
    value = (amplitude_bounce_p(p, x, t, b=b)
             * np.exp(1j * action_bounce_p(p, x, t, b=b)))
    return PropagatorValue(complex(value), BranchFlag.OK)


def propagator_dirichlet_p(p, x, t) -> PropagatorValue:
    """Dirichlet combination: direct - bounce where both exist, else the
    single existing branch, else 0 with a FORBIDDEN flag."""
    cls = classical.classify_momentum_paths(p, x, t)
    if PathClass.CRITICAL in cls:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.CRITICAL)
    has_direct = cls.direct_tag is not None
    has_bounce = PathClass.BOUNCE in cls
    if not has_direct and not has_bounce:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.FORBIDDEN)
    value = 0.0 + 0.0j
    if has_direct:
        value += propagator_direct_p(p, x, t).value
    if has_bounce:
        value -= propagator_bounce_p(p, x, t).value
    return PropagatorValue(value, BranchFlag.OK)


# ---------------------------------------------------------------------------
# Vectorized grid evaluation


def propagator_direct_p_grid(p, x, t):
    """U_direct on arrays; admissibility is the caller's responsibility."""
    return AMP_DIRECT * np.exp(1j * action_direct_p(p, x, t))


def propagator_bounce_p_grid(p, x, t, b=None):
    """U_bounce on arrays of admissible points."""
    if b is None:
        b = classical.bounce_time_momentum_closed_form(p, x, t)
    return (amplitude_bounce_p(np.asarray(p, dtype=float), np.asarray(x, dtype=float),
                               np.asarray(t, dtype=float), b=b)
            * np.exp(1j * action_bounce_p(p, x, t, b=b)))


def branch_windows(x, t):
    """Alias of the classical interval decomposition used by packet quadrature."""
    return classical.momentum_branch_intervals(x, t)
