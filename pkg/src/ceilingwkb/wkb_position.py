"""WKB actions, amplitudes, and propagators for initial-position data.

The propagator ansatz is U = A exp(i S) with the action S accumulated along the
classical path and the amplitude built from the Jacobian of the trajectory map.
Two branches exist inside the critical curve: the direct branch (identical to
the boundary-free linear-potential propagator) and the bounce branch, whose
amplitude vanishes on the critical curve t = sqrt(x) + sqrt(y).  The Dirichlet
(ceiling) propagator is the difference direct - bounce; the sum solves the
Neumann problem to lowest order.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import classical
from .classical import PathClass
from .errors import BranchNotAdmissible, DomainError, NoBouncePath

SQRT_I_INV = complex(math.cos(math.pi / 4.0), -math.sin(math.pi / 4.0))
# 1/sqrt(i) on the principal branch: exp(-i pi / 4).

# Within this distance of the critical curve (measured as |t - sqrt x - sqrt y|)
# the two branches are numerically degenerate and the combined propagators
# report the single critical-branch value instead of differencing them.
NEAR_CRITICAL_TOL = 1e-8


class BranchFlag(enum.Enum):
    OK = "ok"
    CRITICAL = "critical"
    FORBIDDEN = "forbidden"


@dataclass(frozen=True)
class PropagatorValue:
    """A complex propagator value plus a quality flag.

    The flag distinguishes a genuine numeric 0 from 'no classical path here'
    (FORBIDDEN) and from 'evaluated on the degenerate critical branch'.
    """

    value: complex
    flag: BranchFlag = BranchFlag.OK

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class WkbBranch:
    """Action, amplitude, and tag of one WKB branch."""

    action: float
    amplitude: complex
    branch: PathClass

    @property
    def value(self) -> complex:
        return self.amplitude * np.exp(1j * self.action)

    @property
    def density(self) -> float:
        return float(abs(self.amplitude) ** 2)


# ---------------------------------------------------------------------------
# Actions


def action_segment(q0, t0, q1, t1):
    """Action of the unique parabolic arc from (q0, t0) to (q1, t1).

    Array-friendly; raises DomainError for t1 <= t0 on scalar input.
    """
    q0 = np.asarray(q0, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    dt = np.asarray(t1, dtype=float) - np.asarray(t0, dtype=float)
    if np.any(dt <= 0.0):
        raise DomainError("action_segment requires t1 > t0")
    k = (q1 - q0) / dt - dt
    s = (2.0 / 3.0) * dt ** 3 + dt * dt * k + dt * (0.25 * k * k + q0)
    return s if s.ndim else float(s)


def action_direct_y(y, x, t):
    """Action of the direct branch (array-friendly; no admissibility check)."""
    return action_segment(y, 0.0, x, t)


def action_bounce_y(y, x, t, b=None):
    """Action of the bounce branch, composed segmentwise through the bounce.

    ``b`` may be supplied (e.g. precomputed on an array) to skip the cubic solve.
    """
    if b is None:
        b = classical.bounce_time_position(y, x, t)
    b = np.asarray(b, dtype=float)
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    # degenerate segments (y = 0 -> b = 0, x = 0 -> b = t) are dropped; the
    # clamps keep the discarded branch of np.where finite to evaluate
    eps = 1e-12 * np.maximum(1.0, t)
    b1 = np.maximum(b, eps)
    b2 = np.minimum(b, t - eps)
    s1 = np.where(b > 0.0, action_segment(y, 0.0, 0.0, b1), 0.0)
    s2 = np.where(b < t, action_segment(0.0, b2, x, t), 0.0)
    out = s1 + s2
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Amplitudes


def amplitude_direct_y(t):
    """Direct-branch amplitude 1/sqrt(4 pi i t) = (4 pi t)^(-1/2) exp(-i pi/4)."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0):
        raise DomainError("amplitude_direct_y requires t > 0")
    out = SQRT_I_INV / np.sqrt(4.0 * math.pi * t)
    return out if np.ndim(out) else complex(out)


def _bounce_density_ratio(y, x, t, b):
    """|Jacobian| ratio (y - b^2) / g(b) entering the bounce amplitude.

    g(b) = -3 t b^2 + 2 (t^2 - x - y) b + 3 y t.  The ratio is nonnegative in
    the allowed region and vanishes on the critical curve (y = b^2); tiny
    negative values from rounding are clamped to 0.
    """
    g = -3.0 * t * b * b + 2.0 * (t * t - x - y) * b + 3.0 * y * t
    num = y - b * b
    ratio = np.where(g != 0.0, num / np.where(g == 0.0, 1.0, g), np.inf)
    return np.maximum(ratio, 0.0)


def amplitude_bounce_y(y, x, t, b=None):
    """Bounce-branch amplitude; exactly 0 on the critical curve.

    Magnitude sqrt((y - b^2) / (4 pi |g(b)|)); the phase exp(-i pi/4) matches the
    direct amplitude at the ceiling (x = 0, b = t), which fixes the sign
    convention for the Dirichlet difference.
    """
    if np.ndim(y) == 0 and np.ndim(x) == 0 and np.ndim(t) == 0:
        if PathClass.FORBIDDEN in classical.classify_position_paths(y, x, t):
            raise NoBouncePath(f"no bounce path for (y={y}, x={x}, t={t})")
        dist = classical.critical_distance_position(y, x, t)
        if abs(dist) <= NEAR_CRITICAL_TOL:
            return 0.0 + 0.0j
    if b is None:
        b = classical.bounce_time_position(y, x, t)
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    b = np.asarray(b, dtype=float)
    ratio = _bounce_density_ratio(y, x, t, b)
    out = SQRT_I_INV * np.sqrt(ratio / (4.0 * math.pi))
    return out if np.ndim(out) else complex(out)


# ---------------------------------------------------------------------------
# Branch propagators


def propagator_direct_y(y, x, t) -> PropagatorValue:
    """Direct-branch WKB propagator; FORBIDDEN marker where no path exists."""
    cls = classical.classify_position_paths(y, x, t)
    if PathClass.FORBIDDEN in cls:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.FORBIDDEN)
    value = amplitude_direct_y(t) * np.exp(1j * action_direct_y(y, x, t))
    flag = BranchFlag.CRITICAL if PathClass.CRITICAL in cls else BranchFlag.OK
    return PropagatorValue(complex(value), flag)


def propagator_bounce_y(y, x, t) -> PropagatorValue:
    """Bounce-branch WKB propagator; FORBIDDEN marker where no path exists."""
    cls = classical.classify_position_paths(y, x, t)
    if PathClass.FORBIDDEN in cls:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.FORBIDDEN)
    if PathClass.CRITICAL in cls:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.CRITICAL)
    b = classical.bounce_time_position(y, x, t)
    value = amplitude_bounce_y(y, x, t, b=b) * np.exp(1j * action_bounce_y(y, x, t, b=b))
    return PropagatorValue(complex(value), BranchFlag.OK)


def propagator_dirichlet_y(y, x, t) -> PropagatorValue:
    """Dirichlet (ceiling) propagator: direct - bounce, flagged in edge regimes."""
    cls = classical.classify_position_paths(y, x, t)
    if PathClass.FORBIDDEN in cls:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.FORBIDDEN)
    if PathClass.CRITICAL in cls or abs(cls.critical_distance) <= NEAR_CRITICAL_TOL:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.CRITICAL)
    direct = propagator_direct_y(y, x, t).value
    bounce = propagator_bounce_y(y, x, t).value
    return PropagatorValue(direct - bounce, BranchFlag.OK)


def propagator_neumann_y(y, x, t) -> PropagatorValue:
    """Neumann propagator: direct + bounce, flagged in edge regimes."""
    cls = classical.classify_position_paths(y, x, t)
    if PathClass.FORBIDDEN in cls:
        return PropagatorValue(0.0 + 0.0j, BranchFlag.FORBIDDEN)
    if PathClass.CRITICAL in cls or abs(cls.critical_distance) <= NEAR_CRITICAL_TOL:
        return PropagatorValue(propagator_direct_y(y, x, t).value, BranchFlag.CRITICAL)
    direct = propagator_direct_y(y, x, t).value
    bounce = propagator_bounce_y(y, x, t).value
    return PropagatorValue(direct + bounce, BranchFlag.OK)


# ---------------------------------------------------------------------------
# Vectorized grid evaluation (used by quadrature and the CLI)


def propagator_direct_y_grid(y, x, t):
    """U_direct on arrays; NaN-free, caller is responsible for admissibility."""
    return amplitude_direct_y(t) * np.exp(1j * action_direct_y(y, x, t))


def propagator_bounce_y_grid(y, x, t, b=None):
    """U_bounce on arrays of admissible points (bounce branch assumed to exist)."""
    if b is None:
        b = classical.bounce_time_position_closed_form(y, x, t)
    amp = SQRT_I_INV * np.sqrt(
        _bounce_density_ratio(np.asarray(y, dtype=float), np.asarray(x, dtype=float),
                              np.asarray(t, dtype=float), np.asarray(b, dtype=float))
        / (4.0 * math.pi))
    return amp * np.exp(1j * action_bounce_y(y, x, t, b=b))


def branch_data(y, x, t) -> dict:
    """Both WkbBranch records (where admissible) for diagnostic output."""
    cls = classical.classify_position_paths(y, x, t)
    out = {}
    if PathClass.FORBIDDEN in cls:
        return out
    direct_tag = cls.direct_tag or PathClass.CRITICAL
    out["direct"] = WkbBranch(action=float(action_direct_y(y, x, t)),
                              amplitude=complex(amplitude_direct_y(t)),
                              branch=direct_tag)
    if PathClass.BOUNCE in cls:
        b = classical.bounce_time_position(y, x, t)
        out["bounce"] = WkbBranch(action=float(action_bounce_y(y, x, t, b=b)),
                                  amplitude=complex(amplitude_bounce_y(y, x, t, b=b)),
                                  branch=PathClass.BOUNCE)
    return out
