"""Keiper-Li sequences, the log xi series and singularity diagnostics.

From phi(z) = 1 + sum a_j z^j the reciprocal series 1/phi = 1 + sum A_j z^j
follows the recurrence A_1 = -a_1, A_j = -a_j - sum_{p<j} a_p A_{j-p}; the
logarithmic-derivative coefficients lambda_{n+1} (Li normalization) come
from the product (sum j a_j z^(j-1)) * (1/phi). Keiper's normalization
differs by the factor n. Non-negativity of every lambda_n is the
Riemann-hypothesis-equivalent condition this machinery exists to probe.

Two singularity diagnostics for phi's unit circle: the coefficient-root
radius estimates R_n = exp(-log a_n / n), and the binomial transform
b_n = sum_m C(n,m) a_m whose roots b_n^(-1/n) tend to 1/2 exactly when
z = 1 is singular. With the (growing) Li coefficients the b-roots approach
1/2 from below, dipping to a shallow minimum before turning upward.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import exp, log, mp, mpf

from .errors import InvariantViolation, PrecisionRefusal
from .li import LiCoefficients
from .series import PowerSeries, series_log, series_mul, series_reciprocal
from .xi import XiCoefficients, even_odd_coeffs


@dataclass(frozen=True)
class LambdaSequence:
    """lambda_n in both normalizations; keiper_values[n-1] * n == li_values[n-1]."""

    li_values: tuple
    keiper_values: tuple
    J: int

    def __post_init__(self):
        if any(v <= 0 for v in self.li_values):
            raise InvariantViolation("lambda positivity violated")


def phi_series(li: LiCoefficients, order: int) -> PowerSeries:
    """phi(z) = 1 + sum a_j z^j as a series about z = 0, unit constant term."""
    if order - 1 > li.N:
        raise PrecisionRefusal("phi series order %d needs a_n through %d" % (order, order - 1))
    with li.ctx.workdps():
        return PowerSeries(mpf(0), (mp.one,) + tuple(li.values[: order - 1]))


def inverse_phi_series(li: LiCoefficients, J: int) -> PowerSeries:
    """1/phi(z) through z^J; every z-coefficient comes out negative."""
    return series_reciprocal(phi_series(li, J + 1))


def lambda_sequence(li: LiCoefficients, J: int) -> LambdaSequence:
    """lambda_1..lambda_J via the product of phi' with 1/phi."""
    if li.N < J + 1:
        raise PrecisionRefusal("lambda to J=%d needs a_n through N>=%d" % (J, J + 1))
    ctx = li.ctx
    with ctx.workdps():
        phi = phi_series(li, J + 2)
        dphi = PowerSeries(mpf(0), tuple((j + 1) * li.values[j] for j in range(J + 1)))
        recip = series_reciprocal(PowerSeries(mpf(0), phi.coeffs[: J + 1]))
        prod = series_mul(dphi, recip)
        lam = prod.coeffs[:J]
        keiper = tuple(lam[n - 1] / n for n in range(1, J + 1))
        return LambdaSequence(li_values=tuple(lam), keiper_values=keiper, J=J)


def log_xi_series(order: int, xi: XiCoefficients) -> PowerSeries:
    """Series of log xi(s) about s = 0; constant term -log 2.

    Built from the even/odd coefficients of 2 xi(s) followed by the series
    logarithm, then shifted by -log 2.
    """
    if order > 2 * xi.R:
        raise PrecisionRefusal("order %d exceeds 2R for table R=%d" % (order, xi.R))
    ctx = xi.ctx
    with ctx.workdps():
        L = max(1, (order + 1) // 2)
        eo = even_odd_coeffs(L, xi)
        two_xi = eo.two_xi_series(order)
        lg = series_log(two_xi)
        return PowerSeries(lg.center, (lg.coeffs[0] - log(2),) + lg.coeffs[1:])


@dataclass(frozen=True)
class SingularityDiagnostics:
    """b_n transform and/or radius estimates; either part may be absent."""

    b: tuple | None = None               # b_n, n = 0..N
    root_estimates: tuple | None = None  # b_n^(-1/n), n = 1..N
    R_estimates: tuple | None = None     # exp(-log a_n / n), n = 1..N


def titchmarsh_bn(li: LiCoefficients, N: int) -> SingularityDiagnostics:
    """b_n = sum_{m=0..n} C(n,m) a_m with the a_0 = 1 convention.

    Binomials are exact integers; all terms positive. Emits b_0..b_N and
    the roots b_n^(-1/n) for n = 1..N.
    """
    if N > li.N:
        raise PrecisionRefusal("b_n to N=%d needs a_n through %d" % (N, N))
    ctx = li.ctx
    with ctx.workdps():
        b = [mp.one]
        roots = []
        for n in range(1, N + 1):
            c = 1
            s = mp.one  # m = 0 term
            for m in range(1, n + 1):
                c = c * (n - m + 1) // m
                s += c * li.values[m - 1]
            b.append(s)
            roots.append(exp(-log(s) / n))
        diag = SingularityDiagnostics(b=tuple(b), root_estimates=tuple(roots))
        for n in range(1, N + 1):
            if not b[n] >= li.values[n - 1]:
                raise InvariantViolation("b_%d < a_%d" % (n, n))
        return diag


def radius_estimates(li: LiCoefficients) -> SingularityDiagnostics:
    """R_n = exp(-log a_n / n) for n = 1..N."""
    with li.ctx.workdps():
        return SingularityDiagnostics(
            R_estimates=tuple(exp(-log(li.values[n - 1]) / n) for n in range(1, li.N + 1))
        )
