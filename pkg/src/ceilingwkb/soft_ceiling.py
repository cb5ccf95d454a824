"""Trajectory families in the smooth potential V(q) = q + q^n and their caustic.

This module keeps the flipped local geometry: the particle starts at the
origin, the linear term pulls it back down, and the steep q^n wall stands in
for the ceiling at q = 1.  As n grows the fold caustic formed by the family
envelope converges to that ceiling plus the hard-wall critical curve.  The map
back to the main modules' geometry (ceiling at 0, motion in x > 0) is provided
explicitly for the critical-trajectory comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, EnvelopeNotFound, StepFailure

FLOOR_CUTOFF = -0.99  # post-floor-reflection returns are artifacts of the model


@dataclass(frozen=True)
class SoftPotentialConfig:
    n: int = 6
    p0_grid: tuple = tuple(np.round(np.arange(0.1, 2.01, 0.05), 10))
    t_max: float = 3.0
    atol: float = 1e-9
    rtol: float = 1e-9
    sample_step: float = 0.01

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise DomainError("n must be an even integer >= 2")
        if self.t_max <= 0.0 or self.sample_step <= 0.0:
            raise DomainError("t_max and sample_step must be positive")


@dataclass(frozen=True)
class SampledTrajectory:
    p0: float
    tau: np.ndarray
    q: np.ndarray
    p: np.ndarray

    def energy(self, n: int) -> np.ndarray:
        # H = p^2 + V(q) in units m = 1/2
        return self.p ** 2 + self.q + self.q ** n


@dataclass(frozen=True)
class TrajectoryFamily:
    """Trajectories from the origin on a common time grid, NaN past truncation."""

    config: SoftPotentialConfig
    tau: np.ndarray
    q: np.ndarray  # shape (len(p0_grid), len(tau))
    p: np.ndarray
    unstable: np.ndarray  # per-trajectory instability flags

    @property
    def p0_grid(self) -> np.ndarray:
        return np.asarray(self.config.p0_grid, dtype=float)


@dataclass(frozen=True)
class CausticCurve:
    points: list  # (t, x) sorted by t
    pair_indices: list = field(default_factory=list)  # which adjacent pair crossed

    def plateau_level(self, t_lo=None) -> float:
        """Max envelope height over the late half (or from t_lo) of the curve."""
        ts = np.array([p[0] for p in self.points])
        xs = np.array([p[1] for p in self.points])
        if t_lo is None:
            t_lo = 0.5 * (ts[0] + ts[-1])
        sel = ts >= t_lo
        if not sel.any():
            sel = slice(None)
        return float(np.max(xs[sel]))


def potential(q, n):
    return q + q ** n


def _rhs(n):
    big = 1e300

    def fun(_, state):
        q, p = state
        # cap the wall force so RK45 trial steps past |q| ~ 1 cannot overflow
        aq = abs(q)
        if aq > 1.0 and (n - 1) * math.log(aq) > 690.0:
            grad = math.copysign(big, q)
        else:
            grad = n * q ** (n - 1)
        return (2.0 * p, -(1.0 + grad))
    return fun


def integrate_soft(p0, config: SoftPotentialConfig) -> SampledTrajectory:
    """Integrate one trajectory from the origin with initial momentum p0.

    q' = 2p, p' = -V'(q) = -(1 + n q^(n-1)); adaptive RK45 with dense output on
    the sample grid.  Raises StepFailure if the solver cannot meet tolerance.
    """
    tau = np.arange(0.0, config.t_max + 0.5 * config.sample_step, config.sample_step)
    sol = solve_ivp(_rhs(config.n), (0.0, config.t_max), (0.0, float(p0)),
                    t_eval=tau, rtol=config.rtol, atol=config.atol,
                    method="RK45", dense_output=False)
    if not sol.success:
        raise StepFailure(f"ODE integration failed for p0={p0}: {sol.message}")
    return SampledTrajectory(float(p0), tau, sol.y[0], sol.y[1])


def _flag_unstable(q, p0_grid):
    """Flag trajectories crossed from below by a higher-p0 neighbor at the wall."""
    m = q.shape[0]
    flags = np.zeros(m, dtype=bool)
    for i in range(m - 1):
        both = ~np.isnan(q[i]) & ~np.isnan(q[i + 1])
        near_wall = both & (q[i] > 0.95) & (q[i + 1] > 0.95)
        if np.any(near_wall & (q[i] > q[i + 1] + 1e-6)):
            # higher initial momentum should stay above until the fold; a
            # crossing this deep in the wall region marks stiff-region noise
            if np.any(near_wall & (np.abs(q[i] - 1.0) < 5e-3)):
                flags[i] = True
    return flags


def sweep_family(config: SoftPotentialConfig) -> TrajectoryFamily:
    """Integrate the whole p0 grid and truncate post-floor returns."""
    trajs = []
    for idx, p0 in enumerate(config.p0_grid):
        try:
            trajs.append(integrate_soft(p0, config))
        except StepFailure as exc:
            raise StepFailure(f"trajectory {idx}: {exc}") from exc
    tau = trajs[0].tau
    q = np.vstack([tr.q for tr in trajs])
    p = np.vstack([tr.p for tr in trajs])
    below = q < FLOOR_CUTOFF
    for i in range(q.shape[0]):
        hits = np.nonzero(below[i])[0]
        if hits.size:
            q[i, hits[0]:] = np.nan
            p[i, hits[0]:] = np.nan
    return TrajectoryFamily(config, tau, q, p, _flag_unstable(q, config.p0_grid))


def detect_envelope(family: TrajectoryFamily) -> CausticCurve:
    """Fold caustic as the zero set of the finite-difference dx/dp0.

    At each sampled time the signed differences q_{i+1} - q_i across adjacent
    trajectories are scanned for sign changes; the envelope point interpolates
    linearly to the zero in p0 and reads the height there.
    """
    if family.q.shape[0] < 3:
        raise DomainError("envelope detection needs at least 3 trajectories")
    p0 = family.p0_grid
    points, pairs = [], []
    for j, t in enumerate(family.tau):
        col = family.q[:, j]
        dq = np.diff(col)
        valid = ~np.isnan(dq)
        sign_change = valid[:-1] & valid[1:] & (dq[:-1] > 0.0) & (dq[1:] <= 0.0)
        idx = np.nonzero(sign_change)[0]
        if not idx.size:
            continue
        i = int(idx[0])
        # quadratic vertex through the three trajectories bracketing the fold
        c0, c1, c2 = col[i], col[i + 1], col[i + 2]
        curv = c0 - 2.0 * c1 + c2
        x_env = c1 - (c2 - c0) ** 2 / (8.0 * curv) if curv != 0.0 else c1
        points.append((float(t), float(x_env)))
        pairs.append((i, i + 1))
    if not points:
        raise EnvelopeNotFound("no dx/dp0 sign change anywhere in the family")
    order = np.argsort([p[0] for p in points])
    return CausticCurve([points[k] for k in order], [pairs[k] for k in order])


def hard_wall_critical_path(tau):
    """Hard-ceiling critical bounce path mapped into this module's geometry.

    In the main geometry the critical path grazes the ceiling; flipped so the
    wall sits at q = 1 and the motion starts at the origin it reads
    x(tau) = 1 - (tau - 1)^2, tangent to the wall at tau = 1.
    """
    tau = np.asarray(tau, dtype=float)
    out = 1.0 - (tau - 1.0) ** 2
    return out if out.ndim else float(out)


def envelope_wall_gap(curve: CausticCurve, t_lo=1.2, t_hi=2.0) -> float:
    """Sup distance between the envelope and the mapped critical path on a window."""
    pts = [(t, x) for t, x in curve.points if t_lo <= t <= t_hi]
    if not pts:
        raise EnvelopeNotFound(f"no envelope points in [{t_lo}, {t_hi}]")
    return float(max(abs(x - hard_wall_critical_path(t)) for t, x in pts))
