"""Semiclassical propagators for a quantum particle under a reflecting ceiling
in a uniform field.

Units throughout: hbar = 1, m = 1/2, unit field slope.  Positions carry
dimensions of time squared and momenta of time.
"""
from . import classical, oracle, packets, soft_ceiling, wkb_momentum, wkb_position
from ._kernels import HAS_EXTENSION
from .errors import CeilingWkbError

__version__ = "1.0.0"

__all__ = [
    "classical", "wkb_position", "wkb_momentum", "packets", "soft_ceiling",
    "oracle", "CeilingWkbError", "HAS_EXTENSION", "__version__",
]
