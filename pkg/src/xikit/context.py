"""Precision context threaded through every computation.

All numerical work happens in mpmath working precision of
``digits + guard_digits`` decimal places; ``digits`` is the accuracy the
caller may rely on in outputs, the guard digits absorb roundoff
accumulation. ``tail_tol`` is the threshold below which series and
summation tails are declared negligible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, mpf

from .errors import XikitError

DEFAULT_GUARD = 10
DEFAULT_SERIES_ORDER = 64


@dataclass(frozen=True)
class PrecisionContext:
    digits: int
    guard_digits: int = DEFAULT_GUARD
    series_order: int = DEFAULT_SERIES_ORDER
    tail_tol_exp: int | None = None  # tail_tol = 10**-tail_tol_exp; defaults to digits

    def __post_init__(self):
        if self.digits < 20:
            raise XikitError("digits must be >= 20, got %d" % self.digits)
        if self.guard_digits < 5:
            raise XikitError("guard_digits must be >= 5, got %d" % self.guard_digits)
        if self.series_order < 1:
            raise XikitError("series_order must be >= 1")
        if self.tail_tol_exp is None:
            object.__setattr__(self, "tail_tol_exp", self.digits)
        if self.tail_tol_exp > self.digits:
            # tail_tol >= 10^-digits required
            raise XikitError(
                "tail_tol 1e-%d below the 1e-%d floor set by digits"
                % (self.tail_tol_exp, self.digits)
            )

    @property
    def dps(self) -> int:
        return self.digits + self.guard_digits

    @property
    def tail_tol(self):
        with mp.workdps(self.dps):
            return mpf(10) ** (-self.tail_tol_exp)

    def workdps(self):
        """Context manager setting mpmath working precision."""
        return mp.workdps(self.dps)

    def mpf(self, x):
        with mp.workdps(self.dps):
            return mpf(x)
