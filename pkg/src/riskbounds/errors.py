"""Exception types shared across the package."""


class RiskBoundsError(Exception):
    """Base class for errors raised by this package."""


class DomainError(RiskBoundsError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalError(RiskBoundsError, ArithmeticError):
    """An iterative method failed to converge or to bracket a root."""


class DataError(RiskBoundsError, ValueError):
    """Input measurements are malformed or insufficient."""


class UsageError(RiskBoundsError, ValueError):
    """The request is malformed or combines incompatible options."""
