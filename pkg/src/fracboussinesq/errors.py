"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain an operation supports."""


class ConvergenceError(RuntimeError):
    """A quadrature or series did not reach the requested accuracy."""


class RefusalError(RuntimeError):
    """The high-precision oracle cannot certify the requested accuracy."""


class DegenerateDenominatorError(ArithmeticError):
    """The mode denominator collapsed; this signals a bug, not a data problem."""


class InvalidReportError(RuntimeError):
    """A verification report finished with no checks in it."""
