"""Kernel backend selection.

Prefers the compiled extension; falls back to pure numpy when it is missing or
when CEILINGWKB_FORCE_FALLBACK is set in the environment.
"""
import os

from . import fallback

HAS_EXTENSION = False

if not os.environ.get("CEILINGWKB_FORCE_FALLBACK"):
    try:
        from . import _core as _backend
        HAS_EXTENSION = True
    except ImportError:
        _backend = fallback
else:
    _backend = fallback

TYPE_I_BIT = fallback.TYPE_I_BIT
TYPE_II_BIT = fallback.TYPE_II_BIT
TYPE_III_BIT = fallback.TYPE_III_BIT
BOUNCE_BIT = fallback.BOUNCE_BIT

propagate_arrival = _backend.propagate_arrival
shoot_position_scalar = _backend.shoot_position_scalar
shoot_momentum_scalar = _backend.shoot_momentum_scalar
position_bitmask_grid = _backend.position_bitmask_grid
momentum_bitmask_grid = _backend.momentum_bitmask_grid

__all__ = [
    "HAS_EXTENSION",
    "TYPE_I_BIT", "TYPE_II_BIT", "TYPE_III_BIT", "BOUNCE_BIT",
    "propagate_arrival",
    "shoot_position_scalar", "shoot_momentum_scalar",
    "position_bitmask_grid", "momentum_bitmask_grid",
    "fallback",
]
