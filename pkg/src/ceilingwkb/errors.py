"""Exception hierarchy shared across the toolkit."""


class CeilingWkbError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CeilingWkbError, ValueError):
    """Inputs outside the physical domain (negative positions, t <= 0, ...)."""


class NoBouncePath(CeilingWkbError):
    """A bounce time was requested for data that admits no bounce trajectory."""


class BranchNotAdmissible(CeilingWkbError):
    """The requested classical branch does not exist for the given data."""


class RootSelectionFailure(CeilingWkbError):
    """No cubic root passed the physical filters within tolerance."""


class QuadratureFailure(CeilingWkbError):
    """Adaptive quadrature could not reach the requested tolerance."""


class StepFailure(CeilingWkbError):
    """The ODE integrator could not reach the requested tolerance."""


class EnvelopeNotFound(CeilingWkbError):
    """No fold (sign change of dx/dp0) was detected anywhere in the family."""


class RangeExceeded(CeilingWkbError, ValueError):
    """Argument outside the supported evaluation range."""


class StencilOutOfDomain(CeilingWkbError):
    """A finite-difference stencil would leave the evaluable domain."""


class SchemaError(CeilingWkbError, ValueError):
    """A CSV or config file does not match the expected schema."""


class ConfigError(CeilingWkbError, ValueError):
    """Invalid run configuration."""
