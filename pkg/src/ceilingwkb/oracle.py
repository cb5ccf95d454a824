"""Independent ground-truth machinery.

Everything here is deliberately decoupled from the WKB construction: a closed
form for the boundary-free propagator, Airy special functions feeding the exact
spectral propagator for the ceiling problem, a finite-difference Schrodinger
residual, an exact shooting solver for the classical two-point problems, and
the two image-method falsifiers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.special

from . import _kernels, classical
from .classical import PathClass
from .errors import DomainError, RangeExceeded, StencilOutOfDomain

AIRY_RANGE = 50.0
WRONSKIAN = 1.0 / math.pi


# ---------------------------------------------------------------------------
# Free propagator


def free_propagator(y, x, t):
    """Boundary-free linear-potential propagator, exact closed form.

    (4 pi i t)^(-1/2) exp(i [(x-y)^2/(4t) + (x+y) t/2 - t^3/12]).
    Array-friendly over y and x; raises DomainError at t = 0.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t == 0.0):
        raise DomainError("free_propagator requires t != 0")
    phase = (x - y) ** 2 / (4.0 * t) + (x + y) * t / 2.0 - t ** 3 / 12.0
    amp = np.exp(-0.25j * np.pi * np.sign(t)) / np.sqrt(4.0 * math.pi * np.abs(t))
    out = amp * np.exp(1j * phase)
    return out if out.ndim else complex(out)


# ---------------------------------------------------------------------------
# Airy machinery


@dataclass(frozen=True)
class AiryPair:
    """Ai, Bi and their derivatives at one real argument."""

    ai: float
    bi: float
    ai_prime: float
    bi_prime: float

    @property
    def wronskian(self) -> float:
        return self.ai * self.bi_prime - self.ai_prime * self.bi


def airy_eval(z: float) -> AiryPair:
    """Evaluate the Airy pair at a real argument with |z| <= 50."""
    if abs(z) > AIRY_RANGE:
        raise RangeExceeded(f"airy_eval supports |z| <= {AIRY_RANGE}, got {z}")
    ai, aip, bi, bip = scipy.special.airy(z)
    return AiryPair(float(ai), float(bi), float(aip), float(bip))


def eigenfunction_ceiling(x, energy):
    """Continuum eigenfunction psi_E(x) = pi [Bi(-E) Ai(-x-E) - Ai(-E) Bi(-x-E)].

    Vanishes at the ceiling x = 0 by construction.  Array-friendly.
    """
    x = np.asarray(x, dtype=float)
    energy = np.asarray(energy, dtype=float)
    ai_e, _, bi_e, _ = scipy.special.airy(-energy)
    ai_x, _, bi_x, _ = scipy.special.airy(-x - energy)
    out = math.pi * (bi_e * ai_x - ai_e * bi_x)
    return out if np.ndim(out) else float(out)


def spectral_density(energy):
    """rho(E) = pi^(-2) [Ai(-E)^2 + Bi(-E)^2]^(-1) (array-friendly)."""
    energy = np.asarray(energy, dtype=float)
    ai_e, _, bi_e, _ = scipy.special.airy(-energy)
    out = 1.0 / (math.pi ** 2 * (ai_e ** 2 + bi_e ** 2))
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class SpectralQuadratureConfig:
    """Controls for the regulated spectral integral."""

    e_min: float = -12.0
    e_max: float = 40.0
    eps_ladder: tuple = (4e-3, 2e-3, 1e-3, 5e-4)
    points_per_unit: int = 24
    spread_limit: float = 0.05

    def __post_init__(self):
        ladder = tuple(self.eps_ladder)
        if any(e <= 0.0 for e in ladder):
            raise DomainError("eps ladder must be positive")
        if any(b >= a for a, b in zip(ladder, ladder[1:])):
            raise DomainError("eps ladder must be strictly decreasing")


@dataclass(frozen=True)
class SpectralResult:
    value: complex
    error_estimate: float
    converged: bool
    ladder_values: tuple = field(default_factory=tuple)

    def __complex__(self) -> complex:
        return complex(self.value)


def _spectral_integral(y, x, t, eps, e_lo, e_hi, points_per_unit):
    # Composite Gauss-Legendre; node density set by the e^{-iEt} oscillation.
    density = max(points_per_unit, int(8 * abs(t)) + points_per_unit)
    n = max(64, int((e_hi - e_lo) * density))
    nodes, weights = np.polynomial.legendre.leggauss(min(n, 20000))
    e = 0.5 * (e_hi - e_lo) * nodes + 0.5 * (e_hi + e_lo)
    w = 0.5 * (e_hi - e_lo) * weights
    integrand = (eigenfunction_ceiling(x, e) * eigenfunction_ceiling(y, e)
                 * spectral_density(e)
                 * np.exp(-1j * e * t - eps * e * e))
    return complex(np.sum(integrand * w))


def exact_propagator_ceiling(y, x, t, config: SpectralQuadratureConfig | None = None):
    """Regulated spectral propagator for the ceiling problem (best-effort).

    Evaluates int psi_E(x) psi_E(y) e^{-iEt} rho(E) dE with a Gaussian
    regulator e^{-eps E^2} on a ladder of eps values, then extrapolates
    eps -> 0 by Richardson (polynomial) extrapolation.  The extrapolation
    spread is the error estimate; a spread above ``spread_limit`` relative
    flags the result NonConverged rather than failing.
    """
    if config is None:
        config = SpectralQuadratureConfig()
    if y <= 0.0 or x <= 0.0 or t <= 0.0:
        raise DomainError("exact_propagator_ceiling requires x, y, t > 0")
    # Bi(-E) appears unsquared in the eigenfunctions; keep its argument (and
    # the shifted arguments) inside the supported Airy range.
    e_lo = max(config.e_min, -(AIRY_RANGE - max(x, y)), -AIRY_RANGE)
    e_hi = min(config.e_max, AIRY_RANGE - 0.0)
    if e_hi <= e_lo:
        raise RangeExceeded("spectral window empty for these arguments")
    ladder = list(config.eps_ladder)
    vals = [_spectral_integral(y, x, t, eps, e_lo, e_hi, config.points_per_unit)
            for eps in ladder]
    # Neville extrapolation to eps = 0 in the regulator parameter.
    tab = list(vals)
    eps = list(ladder)
    for level in range(1, len(tab)):
        for i in range(len(tab) - 1, level - 1, -1):
            denom = eps[i - level] - eps[i]
            tab[i] = tab[i] + (tab[i] - tab[i - 1]) * eps[i] / denom
    value = tab[-1]
    spread = max(abs(value - v) for v in vals[-2:])
    scale = max(abs(value), 1e-30)
    converged = spread <= config.spread_limit * scale
    return SpectralResult(value, float(spread), bool(converged), tuple(vals))


# ---------------------------------------------------------------------------
# Schrodinger residual


def schrodinger_residual(propagator, x, t, h=1e-3):
    """|-D2_x U - x U - i D_t U| with central differences of step h.

    ``propagator`` is any callable (x, t) -> complex.  Raises
    StencilOutOfDomain when a stencil point leaves the physical domain or the
    callable fails there.
    """
    if x - h <= 0.0 or t - h <= 0.0:
        raise StencilOutOfDomain(f"stencil around (x={x}, t={t}) leaves the domain")
    try:
        u = propagator(x, t)
        uxp = propagator(x + h, t)
        uxm = propagator(x - h, t)
        utp = propagator(x, t + h)
        utm = propagator(x, t - h)
    except Exception as exc:
        raise StencilOutOfDomain(str(exc)) from exc
    d2x = (uxp + uxm - 2.0 * u) / (h * h)
    dt = (utp - utm) / (2.0 * h)
    return abs(-d2x - x * u - 1j * dt)


# ---------------------------------------------------------------------------
# Shooting oracle


def shooting_solve(datum, x, t, resolution=256, mode="position"):
    """Brute-force two-point solver by scan-and-bisect on exact paths.

    mode='position': ``datum`` is y; returns [(p0, branch)] of every initial
    momentum whose exact (at most once reflected) path reaches x at time t.
    mode='momentum': ``datum`` is p; returns [(y0, branch)].  Branch tags use
    the same Type I/II/III vs Bounce split as module ``classical``.
    """
    if resolution <= 0:
        raise DomainError("resolution must be positive")
    tags = {
        _kernels.TYPE_I_BIT: PathClass.TYPE_I,
        _kernels.TYPE_II_BIT: PathClass.TYPE_II,
        _kernels.TYPE_III_BIT: PathClass.TYPE_III,
        _kernels.BOUNCE_BIT: PathClass.BOUNCE,
    }
    out = []
    if mode == "position":
        roots = _kernels.shoot_position_scalar(datum, x, t, n_scan=resolution)
        for p0, bounced in roots:
            bit = _kernels.fallback._classify_bits_position(p0, bounced, t)
            out.append((p0, tags[bit]))
        lo, hi = _kernels.fallback._scan_range_position(datum, x, t)
    elif mode == "momentum":
        roots = _kernels.shoot_momentum_scalar(datum, x, t, n_scan=resolution)
        for y0, bounced in roots:
            bit = _kernels.fallback._classify_bits_momentum(datum, bounced, t)
            out.append((y0, tags[bit]))
        lo, hi = _kernels.fallback._scan_range_momentum(datum, x, t)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    if not out:
        # sign-change scanning misses tangent (critical) roots, where the
        # arrival error touches zero without crossing; sweep for a grazing
        # minimum of the squared error instead
        root = _tangent_root(datum, lo, hi, t, x, mode, 4 * resolution)
        if root is not None:
            out.append((root, PathClass.CRITICAL))
    return out


def _tangent_root(datum, lo, hi, t, target, mode, n):
    def err(v):
        if mode == "momentum":
            arrival, _ = _kernels.fallback.propagate_arrival(v, datum, t)
        else:
            arrival, _ = _kernels.fallback.propagate_arrival(datum, v, t)
        return float(arrival) - target

    grid = np.linspace(lo, hi, n)
    vals = np.abs([err(g) for g in grid])
    i = int(np.argmin(vals))
    if i in (0, n - 1):
        return None
    a, b = grid[i - 1], grid[i + 1]
    # golden-section minimization of |err|
    phi = 0.5 * (3.0 - math.sqrt(5.0))
    c, d = a + phi * (b - a), b - phi * (b - a)
    fc, fd = abs(err(c)), abs(err(d))
    for _ in range(120):
        if fc < fd:
            b, d, fd = d, c, fc
            c = a + phi * (b - a)
            fc = abs(err(c))
        else:
            a, c, fc = c, d, fd
            d = b - phi * (b - a)
            fd = abs(err(d))
    best = 0.5 * (a + b)
    if abs(err(best)) <= 1e-8 * max(1.0, abs(target)):
        return float(best)
    return None


def shooting_bitmask_position(ys, xs, ts, n_scan=128):
    """Vectorized branch bitmask (kernel-backed) for flat (y, x, t) arrays."""
    return _kernels.position_bitmask_grid(
        np.ascontiguousarray(ys, dtype=float),
        np.ascontiguousarray(xs, dtype=float),
        np.ascontiguousarray(ts, dtype=float), n_scan=n_scan)


def shooting_bitmask_momentum(ps, xs, ts, n_scan=128):
    """Vectorized branch bitmask (kernel-backed) for flat (p, x, t) arrays."""
    return _kernels.momentum_bitmask_grid(
        np.ascontiguousarray(ps, dtype=float),
        np.ascontiguousarray(xs, dtype=float),
        np.ascontiguousarray(ts, dtype=float), n_scan=n_scan)


# ---------------------------------------------------------------------------
# Image-method falsifiers


@dataclass(frozen=True)
class FalsifierReport:
    """Magnitudes demonstrating why the naive image method fails here.

    boundary_residual: |U_free(0,y,t) - U_free(0,-y,t)| -- the odd-image
        candidate does not vanish at the ceiling.
    equation_residual: Schrodinger residual of U_free(-x, y, t) -- the
        reflected propagator obeys the wrong (sign-flipped) potential.
    fd_baseline: residual of U_free itself at the same stencil, i.e. the
        pure finite-difference noise floor.
    """

    boundary_residual: float
    equation_residual: float
    fd_baseline: float
    h: float


def image_method_falsifiers(y, x, t, h=1e-3) -> FalsifierReport:
    """Quantify both traps of the naive image construction.

    The correct image relation for this potential would need the propagator of
    the even potential |q| - already as hard as the original problem - so it is
    documented here and deliberately not implemented.
    """
    if y <= 0.0 or t <= 0.0:
        raise DomainError("image_method_falsifiers requires y > 0, t > 0")
    trap_a = abs(free_propagator(y, 0.0, t) - free_propagator(-y, 0.0, t))
    trap_b = schrodinger_residual(lambda xx, tt: free_propagator(y, -xx, tt), x, t, h=h)
    baseline = schrodinger_residual(lambda xx, tt: free_propagator(y, xx, tt), x, t, h=h)
    return FalsifierReport(float(trap_a), float(trap_b), float(baseline), h)
