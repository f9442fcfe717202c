"""Exception hierarchy shared by every module.

The CLI maps :class:`DomainError` (and :class:`CalibrationError`) to exit
code 1 and :class:`ConsistencyError` subclasses to exit code 2.
"""


class OsgtError(Exception):
    """Base class for all library errors."""


class DomainError(OsgtError, ValueError):
    """An input violates an operation's precondition."""


class CalibrationError(OsgtError):
    """An inverse problem could not be bracketed or solved."""


class NonMonotoneError(CalibrationError):
    """delta was not monotone over a calibration bracket."""


class ConsistencyError(OsgtError, ArithmeticError):
    """A numerical result contradicts an invariant it must satisfy."""


class QuadratureError(ConsistencyError):
    """Adaptive quadrature failed to converge."""


class SamplerError(ConsistencyError):
    """Rejection sampling exceeded its trial cap."""
