"""Dense truncated power series over mpmath reals/complexes.

Arithmetic follows the truncated-product convention: combining two series
requires equal expansion points and yields the minimum of the two orders,
so the order of the truncation error is always explicit. ``order`` is the
number of stored coefficients (degree + 1).

These operations run at the ambient mpmath precision; run them inside
``PrecisionContext.workdps()`` (the higher-level modules do so themselves).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from mpmath import mp, mpf, log

from .context import PrecisionContext
from .errors import CenterMismatch, XikitError


@dataclass(frozen=True)
class PowerSeries:
    center: object  # mpf or mpc expansion point
    coeffs: tuple   # mpf/mpc, index = power

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __add__(self, other):
        return series_add(self, other)

    def __mul__(self, other):
        return series_mul(self, other)

    def __neg__(self):
        return PowerSeries(self.center, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return series_add(self, -other)

    def __call__(self, point):
        """Evaluate by Horner at ``point``."""
        h = point - self.center
        acc = mp.zero
        for c in reversed(self.coeffs):
            acc = acc * h + c
        return acc


def _check_centers(a: PowerSeries, b: PowerSeries):
    if a.center != b.center:
        raise CenterMismatch(
            "series centers differ: %s vs %s" % (a.center, b.center)
        )


def series_add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Coefficientwise sum, truncated to the minimum order."""
    _check_centers(a, b)
    n = min(a.order, b.order)
    return PowerSeries(a.center, tuple(a.coeffs[k] + b.coeffs[k] for k in range(n)))


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product, truncated to the minimum order."""
    _check_centers(a, b)
    n = min(a.order, b.order)
    out = []
    for k in range(n):
        s = mp.zero
        for i in range(k + 1):
            s += a.coeffs[i] * b.coeffs[k - i]
        out.append(s)
    return PowerSeries(a.center, tuple(out))


def series_reciprocal(a: PowerSeries) -> PowerSeries:
    """Series B with a*B = 1 to the truncation order.

    The constant term must be nonzero; for a unit constant term the
    coefficients follow the recurrence B_j = -a_j - sum_{p<j} a_p B_{j-p}.
    A non-unit constant term is normalized internally.
    """
    c0 = a.coeffs[0]
    if c0 == 0:
        raise XikitError("series_reciprocal: zero constant term")
    norm = [c / c0 for c in a.coeffs]
    out = [mp.one]
    for j in range(1, a.order):
        s = norm[j]
        for p in range(1, j):
            s += norm[p] * out[j - p]
        out.append(-s)
    return PowerSeries(a.center, tuple(c / c0 for c in out))


def series_diff(a: PowerSeries) -> PowerSeries:
    return PowerSeries(a.center, tuple((k + 1) * a.coeffs[k + 1] for k in range(a.order - 1)))


def series_integrate(a: PowerSeries, constant=None) -> PowerSeries:
    c0 = mp.zero if constant is None else constant
    return PowerSeries(a.center, (c0,) + tuple(a.coeffs[k] / (k + 1) for k in range(a.order)))


def series_log(a: PowerSeries) -> PowerSeries:
    """log of a series via the derivative/quotient/antiderivative route.

    Constant term of the result is log of the constant coefficient, which
    must be a positive real.
    """
    c0 = a.coeffs[0]
    if mp.im(c0) != 0 or mp.re(c0) <= 0:
        raise XikitError("series_log: constant term must be a positive real")
    if a.order == 1:
        return PowerSeries(a.center, (log(c0),))
    quot = series_mul(series_diff(a), series_reciprocal(PowerSeries(a.center, a.coeffs[:-1])))
    return series_integrate(quot, constant=log(c0))


def series_exp(a: PowerSeries) -> PowerSeries:
    """Series exponential via B' = A'B; constant term exp(a_0)."""
    out = [mp.exp(a.coeffs[0])]
    for k in range(1, a.order):
        # k*B_k = sum_{j=1..k} j*A_j*B_{k-j}
        s = mp.zero
        for j in range(1, k + 1):
            s += j * a.coeffs[j] * out[k - j]
        out.append(s / k)
    return PowerSeries(a.center, tuple(out))


def binomial_ratio_coeffs(r: int, order: int) -> list[int]:
    """Exact integer coefficients of ((1+w)/(1-w))^r through w^order.

    Closed form for the w^n coefficient (n >= 1):
    sum_k 2^k C(r,k) C(n-1,k-1). Exact integer arithmetic throughout,
    since these rows feed identities that are checked exactly.
    """
    if r < 0:
        raise XikitError("binomial_ratio_coeffs: r must be >= 0")
    out = [1]
    for n in range(1, order + 1):
        s = 0
        for k in range(1, min(r, n) + 1):
            s += (1 << k) * comb(r, k) * comb(n - 1, k - 1)
        out.append(s)
    return out


def binomial_ratio_series(r: int, order: int, ctx: PrecisionContext) -> PowerSeries:
    """((1+w)/(1-w))^r about w=0, exact integers cast to context precision."""
    if order < 1:
        raise XikitError("binomial_ratio_series: order must be >= 1")
    ints = binomial_ratio_coeffs(r, order)
    with ctx.workdps():
        return PowerSeries(mpf(0), tuple(mpf(c) for c in ints))
