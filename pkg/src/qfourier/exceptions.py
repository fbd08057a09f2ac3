"""Exception and warning types raised by qfourier."""


class QDomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class NonConvergenceError(ArithmeticError):
    """A series or product hit its term cap before meeting the tolerance.

    The partial value reached so far is kept on ``partial``.
    """

    def __init__(self, message, partial=None, terms=None):
        super().__init__(message)
        self.partial = partial
        self.terms = terms


class ScanFailure(RuntimeError):
    """The sign-change scan for a zero ran out of steps."""

    def __init__(self, k, steps):
        super().__init__(f"no sign change of S_q found for zero k={k} after {steps} scan steps")
        self.k = k
        self.steps = steps


class PreconditionError(ValueError):
    """Inputs required by an operation were not supplied."""


class ConfigError(ValueError):
    """A run configuration failed validation."""


class PrecisionWarning(UserWarning):
    """Cancellation is large enough that the requested accuracy may not hold."""
