"""Exception hierarchy shared by all thermops modules."""


class ThermopsError(Exception):
    """Base class for all library errors."""


class InvalidInputError(ThermopsError):
    """Malformed or out-of-domain input (bad beta, negative probabilities, ...)."""


class DimensionMismatchError(InvalidInputError):
    """Operands have incompatible dimensions."""


class OrderingError(ThermopsError):
    """A majorisation / thermo-majorisation precondition does not hold."""


class ApproximationError(ThermopsError):
    """Rational approximation of the thermal vector too coarse for the request.

    Carries the achieved `approx_error` so callers can retry with a larger
    denominator cap.
    """

    def __init__(self, message, approx_error=None):
        super().__init__(message)
        self.approx_error = approx_error


class ResolutionError(ThermopsError):
    """Discretisation too coarse (frequency clusters merging, bath too small)."""


class UnreachableError(ThermopsError):
    """Requested target state is outside the reachable set."""


class UnboundedRateError(ThermopsError):
    """Asymptotic conversion rate diverges (uniform target)."""
