"""Exception hierarchy shared by every module of the package."""


class BLEvansError(Exception):
    """Base class for all package errors."""


class DomainError(BLEvansError, ValueError):
    """An input lies outside the admissible parameter domain."""


class OrderingError(DomainError):
    """The compressive ordering v+ < v0 < 1 is violated."""


class ConfigError(BLEvansError, ValueError):
    """A sweep or CLI configuration is malformed."""


class NumericalError(BLEvansError, ArithmeticError):
    """Base class for failures of a numerical procedure."""


class IntegrationError(NumericalError):
    """Adaptive step control could not meet the requested tolerance."""


class ShootingOverflowError(IntegrationError):
    """The shooting state exceeded the overflow guard (wrong mode selected)."""


class SplittingError(NumericalError):
    """Consistent splitting of an endpoint matrix failed."""


class EigenvalueCollisionError(NumericalError):
    """A continued eigenvalue became (nearly) defective along a path."""


class NearZeroError(NumericalError):
    """An Evans value on a contour is numerically zero."""


class RefinementCapError(NumericalError):
    """Winding refinement exceeded its point budget."""


class DegenerateIndexError(NumericalError):
    """The stability index is undefined because a factor vanishes."""
