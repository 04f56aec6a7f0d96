"""Exception types shared across the package."""


class RisD2DError(Exception):
    """Base class for all package errors."""


class InvalidGeometryError(RisD2DError, ValueError):
    """Raised for geometry that cannot describe a square planar array."""


class InvalidParameterError(RisD2DError, ValueError):
    """Raised for scalar parameters outside their admissible range."""


class BudgetExceededError(RisD2DError, RuntimeError):
    """Raised when an enumeration would exceed the configured budget."""


class NumericalDomainError(RisD2DError, ArithmeticError):
    """Raised when a closed-form evaluation leaves its valid domain."""


class ConfigError(RisD2DError, ValueError):
    """Raised on experiment-file validation failure; message names the field."""
