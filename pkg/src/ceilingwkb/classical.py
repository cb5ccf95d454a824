"""Classical two-point boundary value problem for a linear potential under a ceiling.

Geometry and units: the reflecting ceiling sits at q = 0, the particle lives on
q >= 0, and the potential V(q) = -q pulls it away from the ceiling.  Natural
units hbar = 1, m = 1/2, slope 1 are used throughout, so velocity = 2 * momentum,
momentum grows linearly with time (p(tau) = p(0) + tau), and every trajectory is
a unit-leading-coefficient parabola q(tau) = tau^2 + c1 tau + c0.

Two kinds of initial data are classified and solved:

* position data (y, x, t): initial position y, final position x, elapsed time t;
* momentum data (p, x, t): initial momentum p, final position x, elapsed time t.

A path either avoids the ceiling (direct: rightward, leftward, or turning) or
reflects off it exactly once (bounce).  For position data the two families merge
on the critical curve t = sqrt(x) + sqrt(y), beyond which no path exists.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BranchNotAdmissible,
    DomainError,
    NoBouncePath,
    RootSelectionFailure,
)

HBAR = 1.0
MASS = 0.5
SLOPE = 1.0

# Absolute tolerance for detecting the critical curve / table endpoints.
CRITICAL_TOL = 1e-8
# Cubic residual tolerance, scaled by max(1, t^3) at the call site.
CUBIC_RESIDUAL_TOL = 1e-10
# Quadratic residual tolerance for the momentum bounce time, scaled by max(1, t^2).
QUADRATIC_RESIDUAL_TOL = 1e-12
# Slack allowed when clamping an arcsin/arccos argument that left [-1, 1]
# through rounding.
TRIG_CLAMP_TOL = 1e-12


class PathClass(enum.Enum):
    """Branch tags for classical paths."""

    TYPE_I = "type_i"        # moves away from the ceiling throughout
    TYPE_II = "type_ii"      # moves toward the ceiling throughout
    TYPE_III = "type_iii"    # turns around without touching the ceiling
    BOUNCE = "bounce"        # reflects off the ceiling exactly once
    CRITICAL = "critical"    # direct and bounce paths coincide (grazing)
    FORBIDDEN = "forbidden"  # no classical path

    def __str__(self) -> str:  # CSV-friendly
        return self.value


DIRECT_CLASSES = frozenset({PathClass.TYPE_I, PathClass.TYPE_II, PathClass.TYPE_III})


@dataclass(frozen=True)
class ClassifiedPaths:
    """Result of classifying all admissible branches for one set of data.

    ``boundary_flag`` marks data sitting (within tolerance) on an endpoint of a
    classification interval, where the open-interval table rows are ambivalent.
    ``critical_distance`` is the signed distance to the amplitude-zero locus:
    t - sqrt(x) - sqrt(y) for position data, p - (sqrt(x) - t) for momentum data
    (NaN when the locus is not reachable for the given data).
    """

    tags: frozenset
    boundary_flag: bool = False
    critical_distance: float = math.nan

    def __contains__(self, tag: PathClass) -> bool:
        return tag in self.tags

    @property
    def direct_tag(self):
        for tag in self.tags:
            if tag in DIRECT_CLASSES:
                return tag
        return None


@dataclass(frozen=True)
class Segment:
    """One parabolic arc q(tau) = (tau - t0)^2 + c1 (tau - t0) + c0 on [t0, t1]."""

    t0: float
    t1: float
    c1: float
    c0: float

    def position(self, tau):
        d = np.asarray(tau) - self.t0
        return d * d + self.c1 * d + self.c0

    def momentum(self, tau):
        # p = q_dot / 2 under m = 1/2
        return np.asarray(tau) - self.t0 + 0.5 * self.c1


@dataclass(frozen=True)
class Trajectory:
    """A full classical path: one segment (direct) or two joined at the bounce."""

    segments: tuple
    branch: PathClass
    bounce_time: float | None = None

    @property
    def initial_momentum(self) -> float:
        return float(self.segments[0].momentum(self.segments[0].t0))

    @property
    def final_momentum(self) -> float:
        return float(self.segments[-1].momentum(self.segments[-1].t1))

    @property
    def energy(self) -> float:
        # H = p^2 - q is conserved along each segment; evaluate at the start.
        seg = self.segments[0]
        p0 = seg.momentum(seg.t0)
        return float(p0 * p0 - seg.c0)

    def _segment_for(self, tau: float) -> Segment:
        for seg in self.segments:
            if tau <= seg.t1 or seg is self.segments[-1]:
                return seg
        return self.segments[-1]

    def position(self, tau):
        taus = np.atleast_1d(np.asarray(tau, dtype=float))
        out = np.empty_like(taus)
        for i, ti in enumerate(taus):
            out[i] = self._segment_for(ti).position(ti)
        return out if np.ndim(tau) else float(out[0])

    def momentum(self, tau):
        taus = np.atleast_1d(np.asarray(tau, dtype=float))
        out = np.empty_like(taus)
        for i, ti in enumerate(taus):
            out[i] = self._segment_for(ti).momentum(ti)
        return out if np.ndim(tau) else float(out[0])


@dataclass(frozen=True)
class TurningData:
    """Turning time n = -p(0) and the position q(n) reached there."""

    n: float
    q_n: float


@dataclass(frozen=True)
class CubicSolution:
    """Trigonometric solution data for the bounce-time cubic f(b) = 0."""

    q: float
    r: float
    d: float
    theta: float
    roots: tuple
    b_c_minus: float
    b_c_plus: float
    coefficients: tuple = field(default=())  # (a2, a1, a0)


# ---------------------------------------------------------------------------
# Basic geometry helpers


def _check_position_domain(y, x, t) -> None:
    if y < 0 or x < 0:
        raise DomainError(f"positions must be nonnegative, got y={y}, x={x}")
    if t <= 0:
        raise DomainError(f"time must be positive, got t={t}")


def _check_momentum_domain(x, t) -> None:
    if x < 0:
        raise DomainError(f"final position must be nonnegative, got x={x}")
    if t <= 0:
        raise DomainError(f"time must be positive, got t={t}")


def critical_position(x, t):
    """Smallest initial position y_c = (t - sqrt(x))^2 reachable at (x, t).

    For t < sqrt(x) every y >= 0 admits classical paths and 0 is returned.
    Array-friendly.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    d = t - np.sqrt(x)
    out = np.where(d > 0.0, d * d, 0.0)
    return out if out.ndim else float(out)


def critical_momentum(x, t):
    """Initial momentum p = sqrt(x) - t at which the bounce amplitude vanishes.

    Meaningful (negative) only for x < t^2; the locus is b_p = -p.
    """
    return math.sqrt(x) - t


def critical_distance_position(y, x, t):
    """Signed distance t - sqrt(x) - sqrt(y); positive inside the forbidden region."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    out = t - np.sqrt(x) - np.sqrt(y)
    return out if out.ndim else float(out)


def turning_data_position(y, x, t) -> TurningData:
    """Turning time and turning position of the direct path for position data."""
    _check_position_domain(y, x, t)
    n = 0.5 * ((y - x) / t + t)
    q_n = y - 0.25 * ((x - y) / t - t) ** 2
    return TurningData(n=float(n), q_n=float(q_n))


# ---------------------------------------------------------------------------
# Classification


def classify_position_paths(y, x, t) -> ClassifiedPaths:
    """All admissible branch tags for initial-position data (y, x, t).

    Forbidden iff t > sqrt(x) + sqrt(y); exactly on the critical curve the
    coincident path is reported with the single Critical tag; otherwise there
    is exactly one direct branch and one bounce branch.
    """
    _check_position_domain(y, x, t)
    dist = t - math.sqrt(x) - math.sqrt(y)
    if dist > CRITICAL_TOL:
        return ClassifiedPaths(frozenset({PathClass.FORBIDDEN}),
                               critical_distance=dist)
    if abs(dist) <= CRITICAL_TOL:
        return ClassifiedPaths(frozenset({PathClass.CRITICAL}),
                               boundary_flag=True, critical_distance=dist)

    n = 0.5 * ((y - x) / t + t)
    if n <= 0.0:
        direct = PathClass.TYPE_I
    elif n >= t:
        direct = PathClass.TYPE_II
    else:
        direct = PathClass.TYPE_III

    scale = max(1.0, t)
    boundary = (
        abs(n) <= CRITICAL_TOL * scale
        or abs(n - t) <= CRITICAL_TOL * scale
        or y <= CRITICAL_TOL
        or x <= CRITICAL_TOL
    )
    return ClassifiedPaths(frozenset({direct, PathClass.BOUNCE}),
                           boundary_flag=boundary, critical_distance=dist)


def classify_momentum_paths(p, x, t) -> ClassifiedPaths:
    """All admissible branch tags for initial-momentum data (p, x, t).

    Implements the interval logic of the momentum classification table; the
    result may be empty (no classical path), a single branch, or a direct
    branch plus a bounce branch.
    """
    _check_momentum_domain(x, t)
    p = float(p)
    tags = set()
    sx = math.sqrt(x)
    dist = p - (sx - t) if x < t * t else math.nan

    if x < t * t and abs(p - (sx - t)) <= CRITICAL_TOL:
        return ClassifiedPaths(frozenset({PathClass.CRITICAL}),
                               boundary_flag=True, critical_distance=dist)

    if x > t * t:
        if 0.0 < p < (x - t * t) / (2.0 * t):
            tags.add(PathClass.TYPE_I)
        if p < -t:
            tags.add(PathClass.TYPE_II)
        if -t < p < 0.0:
            tags.add(PathClass.TYPE_III)
        if p < (t * t - x) / (2.0 * t):
            tags.add(PathClass.BOUNCE)
        endpoints = (0.0, (x - t * t) / (2.0 * t), -t, (t * t - x) / (2.0 * t))
    else:
        if p < -t:
            tags.add(PathClass.TYPE_II)
        if -t < p < sx - t:
            tags.add(PathClass.TYPE_III)
        if p < sx - t:
            tags.add(PathClass.BOUNCE)
        endpoints = (-t, sx - t)

    scale = max(1.0, t)
    boundary = any(abs(p - e) <= CRITICAL_TOL * scale for e in endpoints)
    boundary = boundary or abs(x - t * t) <= CRITICAL_TOL * scale
    return ClassifiedPaths(frozenset(tags), boundary_flag=boundary,
                           critical_distance=dist)


# ---------------------------------------------------------------------------
# Bounce-time cubic (position data)


def cubic_coefficients(y, x, t):
    """Coefficients (a2, a1, a0) of f(b) = b^3 + a2 b^2 + a1 b + a0."""
    a2 = -1.5 * t
    a1 = 0.5 * t * t - 0.5 * (x + y)
    a0 = 0.5 * y * t
    return a2, a1, a0


def cubic_residual(b, y, x, t):
    a2, a1, a0 = cubic_coefficients(y, x, t)
    return ((b + a2) * b + a1) * b + a0


def cubic_discriminant(y, x, t) -> CubicSolution:
    """Full trigonometric solution of the bounce-time cubic.

    For y, x, t > 0 the discriminant D = R^2 + Q^3 is strictly negative, so all
    three roots are real and unequal; they straddle the extremum abscissae
    b_c-+ = t/2 -+ sqrt(-Q).
    """
    if y <= 0 or x <= 0 or t <= 0:
        raise DomainError("cubic_discriminant requires y, x, t > 0")
    a2, a1, a0 = cubic_coefficients(y, x, t)
    q = (3.0 * a1 - a2 * a2) / 9.0
    r = (9.0 * a1 * a2 - 27.0 * a0 - 2.0 * a2 ** 3) / 54.0
    d = r * r + q ** 3
    arg = r / math.sqrt(-(q ** 3))
    arg = _clamp_unit(arg)
    theta = math.acos(arg)
    half_t = 0.5 * t
    amp = 2.0 * math.sqrt(-q)
    roots = tuple(half_t + amp * math.cos((theta + 2.0 * j * math.pi) / 3.0)
                  for j in range(3))
    sq = math.sqrt(-q)
    return CubicSolution(q=q, r=r, d=d, theta=theta, roots=roots,
                         b_c_minus=half_t - sq, b_c_plus=half_t + sq,
                         coefficients=(a2, a1, a0))


def _clamp_unit(v: float) -> float:
    if v > 1.0:
        if v > 1.0 + TRIG_CLAMP_TOL:
            raise RootSelectionFailure(f"trig argument {v} outside [-1, 1]")
        return 1.0
    if v < -1.0:
        if v < -1.0 - TRIG_CLAMP_TOL:
            raise RootSelectionFailure(f"trig argument {v} outside [-1, 1]")
        return -1.0
    return v


def bounce_time_position_closed_form(y, x, t):
    """Closed trigonometric bounce time (array-friendly, no physical filters).

    b = t/2 + sqrt((t^2 + 2(x+y))/3) * sin(arcsin(3 sqrt(3) t (y-x)
        / (t^2 + 2(x+y))^(3/2)) / 3),
    followed by two Newton polish steps on the cubic.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    m = t * t + 2.0 * (x + y)
    arg = 3.0 * math.sqrt(3.0) * t * (y - x) / m ** 1.5
    arg = np.clip(arg, -1.0, 1.0)
    b = 0.5 * t + np.sqrt(m / 3.0) * np.sin(np.arcsin(arg) / 3.0)
    # Newton polish; the root is simple away from the critical curve.
    for _ in range(2):
        a2 = -1.5 * t
        a1 = 0.5 * t * t - 0.5 * (x + y)
        a0 = 0.5 * y * t
        f = ((b + a2) * b + a1) * b + a0
        fp = (3.0 * b + 2.0 * a2) * b + a1
        step = np.where(np.abs(fp) > 0.0, f / np.where(fp == 0.0, 1.0, fp), 0.0)
        b = b - step
    return b if b.ndim else float(b)


def bounce_time_position(y, x, t) -> float:
    """Physical bounce time b_y for position data, selected by physical filters.

    The root must lie in [0, t], satisfy y - b^2 >= 0 (pre-bounce motion toward
    the ceiling) and x - (t - b)^2 >= 0 (post-bounce motion away from it), and
    have cubic residual within 1e-10 * max(1, t^3).  The closed trigonometric
    form is preferred; if it fails the filters, the three cos-form roots are
    tried.  Degenerate data y = 0 / x = 0 return 0 / t.
    """
    _check_position_domain(y, x, t)
    cls = classify_position_paths(y, x, t)
    if PathClass.FORBIDDEN in cls:
        raise NoBouncePath(f"no bounce path for (y={y}, x={x}, t={t})")
    if y <= 0.0:
        return 0.0
    if x <= 0.0:
        return float(t)

    tol = CUBIC_RESIDUAL_TOL * max(1.0, t ** 3)
    slack = 1e-9 * max(1.0, t)

    def admissible(b: float) -> bool:
        return (-slack <= b <= t + slack
                and y - b * b >= -slack * max(1.0, y)
                and x - (t - b) ** 2 >= -slack * max(1.0, x))

    b = float(bounce_time_position_closed_form(y, x, t))
    if admissible(b) and abs(cubic_residual(b, y, x, t)) <= tol:
        return min(max(b, 0.0), float(t))

    sol = cubic_discriminant(y, x, t)
    candidates = [b for b in sol.roots
                  if admissible(b) and abs(cubic_residual(b, y, x, t)) <= tol]
    if not candidates:
        raise RootSelectionFailure(
            f"no cubic root passed physical filters for (y={y}, x={x}, t={t})")
    best = min(candidates, key=lambda b: abs(cubic_residual(b, y, x, t)))
    return min(max(float(best), 0.0), float(t))


# ---------------------------------------------------------------------------
# Bounce time (momentum data)


def bounce_time_momentum(p, x, t):
    """Bounce time b_p = (2t - p - sqrt((p+t)^2 + 3x)) / 3 for momentum data.

    Raises NoBouncePath unless the classification admits a bounce; the critical
    grazing path (b_p = -p) is allowed and returns -p.
    """
    _check_momentum_domain(x, t)
    cls = classify_momentum_paths(p, x, t)
    if PathClass.BOUNCE not in cls and PathClass.CRITICAL not in cls:
        raise NoBouncePath(f"no bounce path for (p={p}, x={x}, t={t})")
    return bounce_time_momentum_closed_form(p, x, t)


def bounce_time_momentum_closed_form(p, x, t):
    """The closed-form b_p without admissibility checks (array-friendly)."""
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    out = (2.0 * t - p - np.sqrt((p + t) ** 2 + 3.0 * x)) / 3.0
    return out if out.ndim else float(out)


def bounce_residual_momentum(b, p, x, t):
    """Residual of the quadratic ceiling condition q(b; post segment) = 0."""
    return b * b + b * (2.0 * p - 4.0 * t) / 3.0 + (t * t - 2.0 * p * t - x) / 3.0


# ---------------------------------------------------------------------------
# Trajectory construction


def _resolve_branch(branch, cls):
    """Map 'direct'/'bounce' shorthand (or a PathClass value) onto a tag."""
    if isinstance(branch, PathClass):
        return branch
    if branch == "direct":
        tag = cls.direct_tag
        return tag if tag is not None else PathClass.CRITICAL
    if branch == "bounce":
        return PathClass.BOUNCE
    return PathClass(branch)


def trajectory_position(y, x, t, branch="direct") -> Trajectory:
    """Build the classical path for position data on the requested branch."""
    cls = classify_position_paths(y, x, t)
    branch = _resolve_branch(branch, cls)
    if branch not in cls and not (branch == PathClass.BOUNCE
                                  and PathClass.CRITICAL in cls):
        raise BranchNotAdmissible(
            f"branch {branch} not admissible for (y={y}, x={x}, t={t})")

    if branch in DIRECT_CLASSES or branch == PathClass.CRITICAL:
        c1 = (x - y) / t - t
        return Trajectory(segments=(Segment(0.0, float(t), float(c1), float(y)),),
                          branch=branch)

    b = bounce_time_position(y, x, t)
    if b <= 0.0:  # y = 0 degeneracy: single post-bounce segment
        seg = Segment(0.0, float(t), (x / t) - t, 0.0)
        return Trajectory(segments=(seg,), branch=branch, bounce_time=0.0)
    if b >= t:  # x = 0 degeneracy: single pre-bounce segment
        seg = Segment(0.0, float(t), -(t + y / t), float(y))
        return Trajectory(segments=(seg,), branch=branch, bounce_time=float(t))
    seg1 = Segment(0.0, float(b), -(b + y / b), float(y))
    seg2 = Segment(float(b), float(t), x / (t - b) - (t - b), 0.0)
    return Trajectory(segments=(seg1, seg2), branch=branch, bounce_time=float(b))


def trajectory_momentum(p, x, t, branch="direct") -> Trajectory:
    """Build the classical path for momentum data on the requested branch."""
    cls = classify_momentum_paths(p, x, t)
    branch = _resolve_branch(branch, cls)
    if branch not in cls and not (branch == PathClass.BOUNCE
                                  and PathClass.CRITICAL in cls):
        raise BranchNotAdmissible(
            f"branch {branch} not admissible for (p={p}, x={x}, t={t})")

    if branch in DIRECT_CLASSES or branch == PathClass.CRITICAL:
        q0 = x - t * t - 2.0 * p * t
        return Trajectory(segments=(Segment(0.0, float(t), 2.0 * float(p), float(q0)),),
                          branch=branch)

    b = bounce_time_momentum_closed_form(p, x, t)
    q0 = -b * b - 2.0 * p * b
    seg1 = Segment(0.0, float(b), 2.0 * float(p), float(q0))
    seg2 = Segment(float(b), float(t), -2.0 * (float(p) + float(b)), 0.0)
    return Trajectory(segments=(seg1, seg2), branch=branch, bounce_time=float(b))


# ---------------------------------------------------------------------------
# Interval decompositions for quadrature windows


def position_branch_intervals(x, t):
    """(y_lo, y_hi, branch set) decomposition of the y axis for final data (x, t).

    Every admissible y > y_c carries one direct branch and the bounce branch;
    the direct type changes at y = x - t^2 and y = x + t^2.
    """
    _check_momentum_domain(x, t)
    yc = float(critical_position(x, t))
    cuts = [yc]
    for edge in (x - t * t, x + t * t):
        if edge > yc:
            cuts.append(edge)
    cuts.append(math.inf)
    cuts = sorted(set(cuts))
    intervals = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid = lo + 1.0 if math.isinf(hi) else 0.5 * (lo + hi)
        tags = classify_position_paths(mid, x, t).tags
        if PathClass.FORBIDDEN not in tags:
            intervals.append((lo, hi, tags))
    return intervals


def momentum_branch_intervals(x, t):
    """(p_lo, p_hi, branch set) decomposition of the p axis for final data (x, t)."""
    _check_momentum_domain(x, t)
    if x < t * t:
        edges = [-math.inf, -t, math.sqrt(x) - t]
    else:
        pb0 = (t * t - x) / (2.0 * t)
        edges = sorted({-math.inf, -t, pb0, 0.0, (x - t * t) / (2.0 * t)})
    intervals = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = hi - 1.0 if math.isinf(lo) else 0.5 * (lo + hi)
        tags = classify_momentum_paths(mid, x, t).tags
        if tags:
            intervals.append((lo, hi, tags))
    return intervals
