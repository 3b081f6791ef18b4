"""Exception hierarchy.

Two failure classes matter to callers (and to the CLI exit codes):
refusals, where a computation cannot be carried out at the requested
precision or range, and invariant violations, where a computation ran
but the result contradicts a structural property it must satisfy.
"""


class XikitError(Exception):
    """Base class for all package errors."""


class PrecisionRefusal(XikitError):
    """Requested precision, truncation order or range cannot be honored.

    Raised instead of silently extrapolating; CLI exit code 2.
    """


class QuadratureError(PrecisionRefusal):
    """Quadrature failed to converge to the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class InvariantViolation(XikitError):
    """A computed result contradicts a structural invariant; CLI exit code 3."""


class CenterMismatch(XikitError, ValueError):
    """Series arithmetic attempted on series with different expansion points."""
