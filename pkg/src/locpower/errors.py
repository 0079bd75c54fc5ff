"""Exception types shared across the package."""


class LocPowerError(Exception):
    """Base class for all package errors."""


class DegenerateGeometryError(LocPowerError, ValueError):
    """Two points that must be distinct coincide."""


class DomainError(LocPowerError, ValueError):
    """An argument lies outside the domain of the operation."""


class DimensionError(LocPowerError, ValueError):
    """Array shapes are inconsistent."""


class ValidityError(LocPowerError, ValueError):
    """A precondition on a discretization parameter does not hold."""


class InfeasibleBaselineError(LocPowerError):
    """The uniform allocation cannot meet a requirement at any power level."""


class ConfigError(LocPowerError):
    """A scenario or run configuration is malformed."""
