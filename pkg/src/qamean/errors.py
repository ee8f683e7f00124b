"""Exception hierarchy shared by every module.

The CLI maps each family of errors onto an exit code, so new exceptions
should derive from one of the four bases below.
"""


class QAMeanError(Exception):
    """Base class for all package errors."""


class InputError(QAMeanError, ValueError):
    """Malformed or inconsistent arguments."""


class DomainError(QAMeanError, ValueError):
    """A point (or interval) falls outside the admissible domain."""

    def __init__(self, message, x=None, domain=None):
        super().__init__(message)
        self.x = x
        self.domain = domain


class RangeError(DomainError):
    """A value lies outside the range of a generator, so it has no preimage."""


class ConvergenceError(QAMeanError, ArithmeticError):
    """An iterative routine hit its iteration cap."""


class NoRootError(InputError):
    """The requested f-root does not exist (even order of a decreasing map)."""


class ExcludedInvolutionError(InputError):
    """The neutral map is an involution (a = -1), which is excluded from scale building."""


class TargetOutOfRangeError(InputError):
    """Solver target is not strictly inside (min v, max v)."""


class NearExtremeError(ConvergenceError):
    """The solver bracket reached the |beta| cap without straddling the target."""

    def __init__(self, message, extreme):
        super().__init__(message)
        self.extreme = extreme


class MeanOverflowError(QAMeanError, OverflowError):
    """Generator values overflowed while accumulating a mean."""


class WitnessNotFoundError(QAMeanError, LookupError):
    """Grid search did not find a non-comparability witness."""
