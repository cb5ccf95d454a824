"""Gaussian packets and their WKB evolution by branch-windowed quadrature.

The initial state is a Gaussian in position,

    psi(y) = (2 / (gamma pi))^(1/4) exp(-(y - ybar)^2 / gamma + i pbar y),

whose Fourier transform is again Gaussian with width 4/gamma.  Evolution is

    psi(x, t) = int U(x, y, t) psi(y, 0) dy

with the WKB Dirichlet propagator, integrated branch by branch over the
classically allowed intervals (module ``classical`` supplies the windows).
The momentum-representation evolution is analogous with the p-space
propagators and packet.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import classical, wkb_momentum, wkb_position
from .classical import PathClass
from .errors import DomainError, QuadratureFailure

# 7-point Gauss / 15-point Kronrod pair on [-1, 1].  The rule is open: no node
# sits on a panel endpoint, so integrands with endpoint derivative
# singularities (the bounce amplitude at the critical point) are never
# evaluated there.
_XK = np.array([
    -0.99145537112081263921, -0.94910791234275852453, -0.86486442335976907279,
    -0.74153118559939443986, -0.58608723546769113029, -0.40584515137739716691,
    -0.20778495500789846760, 0.0,
    0.20778495500789846760, 0.40584515137739716691, 0.58608723546769113029,
    0.74153118559939443986, 0.86486442335976907279, 0.94910791234275852453,
    0.99145537112081263921,
])
_WK = np.array([
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801,
    0.20443294007529889241, 0.19035057806478540991, 0.16900472663926790283,
    0.14065325971552591875, 0.10479001032225018384, 0.06309209262997855329,
    0.02293532201052922496,
])
_WG = np.array([
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776,
    0.38183005050511894495, 0.27970539148927666790, 0.12948496616886969327,
])
_G_SLICE = slice(1, 15, 2)  # Gauss nodes are every second Kronrod node


@dataclass(frozen=True)
class GaussianPacket:
    """Minimum-uncertainty Gaussian with mean position ybar, mean momentum pbar.

    gamma is the position-space width parameter; sigma_y = sqrt(gamma)/2 and
    sigma_p = 1/sqrt(gamma).
    """

    ybar: float
    pbar: float
    gamma: float

    def __post_init__(self):
        if self.gamma <= 0.0:
            raise DomainError("gamma must be positive")

    @property
    def sigma_y(self) -> float:
        return math.sqrt(self.gamma) / 2.0

    @property
    def sigma_p(self) -> float:
        return 1.0 / math.sqrt(self.gamma)

    def position_wavefunction(self, y):
        y = np.asarray(y, dtype=float)
        norm = (2.0 / (self.gamma * math.pi)) ** 0.25
        out = norm * np.exp(-(y - self.ybar) ** 2 / self.gamma + 1j * self.pbar * y)
        return out if out.ndim else complex(out)

    def momentum_wavefunction(self, p):
        p = np.asarray(p, dtype=float)
        norm = (self.gamma / (2.0 * math.pi)) ** 0.25
        out = norm * np.exp(-self.gamma * (p - self.pbar) ** 2 / 4.0
                            - 1j * self.ybar * (p - self.pbar))
        return out if out.ndim else complex(out)

    @property
    def semiclassical_regime(self) -> bool:
        """ybar >~ gamma: packet well separated from the ceiling on its own scale."""
        return self.ybar >= self.gamma


@dataclass(frozen=True)
class QuadratureConfig:
    atol: float = 1e-10
    rtol: float = 1e-8
    max_subdivisions: int = 4000
    truncation_k: float = 6.0
    oscillation_factor: float = 1.0  # panels refined until |dS| <= factor * pi/2

    def __post_init__(self):
        if self.atol <= 0.0 or self.rtol <= 0.0:
            raise DomainError("tolerances must be positive")
        if self.truncation_k < 4.0:
            raise DomainError("truncation radius k must be >= 4")


@dataclass(frozen=True)
class PacketResult:
    direct_contribution: complex
    bounce_contribution: complex
    total: complex
    intervals_used: list
    error_estimate: float
    warnings: tuple = field(default_factory=tuple)


# ---------------------------------------------------------------------------
# Adaptive Gauss-Kronrod engine


def _panel_eval(f, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    vals = f(mid + half * _XK)
    k = half * np.sum(_WK * vals)
    g = half * np.sum(_WG * vals[_G_SLICE])
    return complex(k), abs(k - g)


def _phase_presplit(intervals, phase, factor):
    """Split each interval so the sampled phase variation per panel <= pi/2."""
    out = []
    for a, b in intervals:
        grid = np.linspace(a, b, 65)
        s = phase(grid)
        variation = float(np.sum(np.abs(np.diff(s))))
        n = max(1, int(math.ceil(variation / (factor * 0.5 * math.pi))))
        edges = np.linspace(a, b, n + 1)
        out.extend(zip(edges[:-1], edges[1:]))
    return out


def _integrate_adaptive(f, phase, intervals, config):
    """Adaptive GK15 over a union of intervals; deterministic assembly.

    Returns (value, error_estimate, n_panels).  Panels are refined worst-first;
    the final sum runs over panels sorted by position so the result does not
    depend on refinement order.
    """
    panels = []
    for a, b in _phase_presplit(intervals, phase, config.oscillation_factor):
        val, err = _panel_eval(f, a, b)
        panels.append([a, b, val, err])
    budget = config.max_subdivisions
    while budget > 0:
        total = sum(p[2] for p in panels)
        err_sum = sum(p[3] for p in panels)
        tol = max(config.atol, config.rtol * abs(total))
        if err_sum <= tol:
            break
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        a, b, _, _ = panels.pop(worst)
        mid = 0.5 * (a + b)
        for lo, hi in ((a, mid), (mid, b)):
            val, err = _panel_eval(f, lo, hi)
            panels.append([lo, hi, val, err])
        budget -= 1
    panels.sort(key=lambda p: p[0])
    total = sum(p[2] for p in panels)
    err_sum = float(sum(p[3] for p in panels))
    if err_sum > max(config.atol, config.rtol * abs(total)):
        raise QuadratureFailure(
            f"error estimate {err_sum:.3e} above tolerance after "
            f"{config.max_subdivisions} subdivisions")
    return complex(total), err_sum, len(panels)


def _clip(lo, hi, a, b):
    lo2, hi2 = max(lo, a), min(hi, b)
    return (lo2, hi2) if hi2 > lo2 else None


# ---------------------------------------------------------------------------
# Evolution


def evolve_position(packet: GaussianPacket, x, t,
                    config: QuadratureConfig | None = None) -> PacketResult:
    """psi(x, t) by branch-separated quadrature in the position representation."""
    if config is None:
        config = QuadratureConfig()
    if t <= 0.0:
        raise DomainError("evolve_position requires t > 0")
    k = config.truncation_k
    window = (packet.ybar - k * packet.sigma_y, packet.ybar + k * packet.sigma_y)
    direct_iv, bounce_iv = [], []
    for lo, hi, tags in classical.position_branch_intervals(x, t):
        clipped = _clip(lo, hi, *window)
        if clipped is None:
            continue
        if tags & classical.DIRECT_CLASSES:
            direct_iv.append(clipped)
        if PathClass.BOUNCE in tags:
            bounce_iv.append(clipped)

    def f_direct(y):
        return wkb_position.propagator_direct_y_grid(y, x, t) * packet.position_wavefunction(y)

    def f_bounce(y):
        return wkb_position.propagator_bounce_y_grid(y, x, t) * packet.position_wavefunction(y)

    def phase_direct(y):
        return wkb_position.action_direct_y(y, x, t)

    def phase_bounce(y):
        b = classical.bounce_time_position_closed_form(y, x, t)
        return wkb_position.action_bounce_y(y, x, t, b=b)

    direct, err_d = 0.0 + 0.0j, 0.0
    if direct_iv:
        direct, err_d, _ = _integrate_adaptive(f_direct, phase_direct, direct_iv, config)
    bounce, err_b = 0.0 + 0.0j, 0.0
    if bounce_iv:
        bounce, err_b, _ = _integrate_adaptive(f_bounce, phase_bounce, bounce_iv, config)
    warnings = () if packet.semiclassical_regime else ("semiclassical-regime",)
    return PacketResult(direct, bounce, direct - bounce,
                        direct_iv + bounce_iv, err_d + err_b, warnings)


def evolve_momentum(packet: GaussianPacket, x, t,
                    config: QuadratureConfig | None = None) -> PacketResult:
    """psi(x, t) by branch-separated quadrature in the momentum representation."""
    if config is None:
        config = QuadratureConfig()
    if t <= 0.0:
        raise DomainError("evolve_momentum requires t > 0")
    k = config.truncation_k
    window = (packet.pbar - k * packet.sigma_p, packet.pbar + k * packet.sigma_p)
    direct_iv, bounce_iv = [], []
    for lo, hi, tags in classical.momentum_branch_intervals(x, t):
        clipped = _clip(lo, hi, *window)
        if clipped is None:
            continue
        if tags & classical.DIRECT_CLASSES:
            direct_iv.append(clipped)
        if PathClass.BOUNCE in tags:
            bounce_iv.append(clipped)

    def f_direct(p):
        return wkb_momentum.propagator_direct_p_grid(p, x, t) * packet.momentum_wavefunction(p)

    def f_bounce(p):
        return wkb_momentum.propagator_bounce_p_grid(p, x, t) * packet.momentum_wavefunction(p)

    def phase_direct(p):
        return wkb_momentum.action_direct_p(p, x, t)

    def phase_bounce(p):
        b = classical.bounce_time_momentum_closed_form(p, x, t)
        return wkb_momentum.action_bounce_p(p, x, t, b=b)

    direct, err_d = 0.0 + 0.0j, 0.0
    if direct_iv:
        direct, err_d, _ = _integrate_adaptive(f_direct, phase_direct, direct_iv, config)
    bounce, err_b = 0.0 + 0.0j, 0.0
    if bounce_iv:
        bounce, err_b, _ = _integrate_adaptive(f_bounce, phase_bounce, bounce_iv, config)
    warnings = () if packet.semiclassical_regime else ("semiclassical-regime",)
    return PacketResult(direct, bounce, direct - bounce,
                        direct_iv + bounce_iv, err_d + err_b, warnings)


# ---------------------------------------------------------------------------
# Fourier-pair consistency


def fourier_pair_check(packet: GaussianPacket, n_probe=41, n_nodes=600) -> float:
    """Max |FT[psi](p) - phi(p)| over a probe grid around pbar.

    The transform phi(p) = (2 pi)^(-1/2) int psi(y) exp(-i p y) dy is computed
    with a dense Gauss-Legendre rule over ybar +/- 10 sigma_y (spectrally
    accurate for this entire integrand).
    """
    half = 10.0 * packet.sigma_y
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    y = packet.ybar + half * nodes
    w = half * weights
    psi = packet.position_wavefunction(y)
    probes = packet.pbar + np.linspace(-4.0, 4.0, n_probe) * packet.sigma_p
    ft = (psi * w) @ np.exp(-1j * np.outer(y, probes)) / math.sqrt(2.0 * math.pi)
    return float(np.max(np.abs(ft - packet.momentum_wavefunction(probes))))
