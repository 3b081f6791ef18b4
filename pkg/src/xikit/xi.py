"""Pustyl'nikov coefficients of the Riemann xi function and evaluations built on them.

The symmetrized xi function ``xi(s) = (1/2) s (s-1) Gamma(s/2) zeta(s) / pi^(s/2)``
has the even expansion ``xi(1/2 + s) = sum_r xi_r s^(2r)`` with every xi_r
positive. The coefficients are computed here as moments of the classical
positive weight

    Phi(u) = sum_{n>=1} (4 pi^2 n^4 e^(9u/2) - 6 pi n^2 e^(5u/2)) exp(-pi n^2 e^(2u)),

namely ``xi_r = (2/(2r)!) * int_0^inf Phi(u) u^(2r) du``, which at r = 0
reproduces xi(1/2) = 2 * int Phi = 0.49712077818831410991. The integrals
are evaluated by tanh-sinh quadrature on a truncated interval [0, U]; U is
chosen so the discarded tail is negligible at working precision, and the
rule level is doubled until the whole moment vector stabilizes.

Every term in sight is positive, so all summations here are free of
cancellation and carry full relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import binomial, cosh, exp, factorial, mp, mpf, pi, sinh, tanh

from .context import PrecisionContext
from .errors import InvariantViolation, PrecisionRefusal, QuadratureError
from .series import PowerSeries

XI0_REFERENCE = "0.49712077818831410991"

_MAX_LEVEL = 13
_START_LEVEL = 7


def phi_weight(u, ctx: PrecisionContext):
    """The positive integrand weight Phi(u), summed to negligible tail.

    With a = e^(u/2) each term is pi n^2 a^5 (2 pi n^2 a^4 - 3) q^(n^2) * 2
    where q = exp(-pi a^4); the factor in parentheses is positive for all
    n >= 1, u >= 0, so truncation by term size is safe.
    """
    with ctx.workdps():
        u = mpf(u)
        if u < 0:
            raise PrecisionRefusal("phi_weight: u must be >= 0")
        a = exp(u / 2)
        a4 = a ** 4
        a5 = a4 * a
        q = exp(-pi * a4)
        cutoff = mpf(10) ** (-ctx.dps - 10)
        total = mp.zero
        n = 1
        while True:
            term = 2 * pi * n * n * a5 * (2 * pi * n * n * a4 - 3) * q ** (n * n)
            total += term
            if term < cutoff * total:
                return total
            n += 1


@dataclass(frozen=True)
class XiCoefficients:
    """Immutable table of xi_r, r = 0..R, with its generation metadata."""

    values: tuple
    R: int
    method: str          # "quadrature" | "imported"
    digits: int
    ctx: PrecisionContext
    quad_error: float    # achieved relative error estimate of the quadrature

    def __post_init__(self):
        if any(v <= 0 for v in self.values):
            raise InvariantViolation("xi_r positivity violated")

    def tail_ratio_bound(self):
        """Upper bound q with xi_{r+1}/xi_r <= q for r >= R (observed, decreasing)."""
        if self.R == 0:
            return self.ctx.mpf(1)
        with self.ctx.workdps():
            return max(self.values[r + 1] / self.values[r]
                       for r in range(max(0, self.R - 5), self.R))


def _tanh_sinh_increment(U, level, cut_dps, known):
    """New tanh-sinh nodes at ``level`` not present at coarser levels.

    Returns (h, [(u, w_t)]) where the quadrature weight is w_t * h * U/2.
    Nodes map t -> u = (U/2)(1 + tanh(pi/2 sinh t)); the lower node uses the
    complementary form 2/(e^(2y)+1) to stay accurate near u = 0.
    """
    h = mpf(2) ** (-level)
    half = mpf(U) / 2
    out = []
    k = 0 if not known else 1
    step = 1 if not known else 2
    while True:
        t = k * h
        s = sinh(t)
        y = pi / 2 * s
        w_t = (pi / 2) * cosh(t) / cosh(y) ** 2
        if k > 0 and w_t * half < mpf(10) ** (-cut_dps):
            break
        x = tanh(y)
        comp = 2 / (exp(2 * y) + 1)
        if k == 0:
            out.append((half, w_t))
        else:
            out.append((half * (1 + x), w_t))
            out.append((half * comp, w_t))
        k += step
    return h, out


def _choose_upper_limit(R: int, dps: int) -> float:
    """Truncation point U for the moment integrals.

    Past the peak the integrand is dominated by exp(-pi e^(2u)) decay, so U
    is chosen from the first-term bound: pi e^(2U) must beat the u^(2R)
    growth plus the precision budget with a wide margin.
    """
    target = (dps + 30) * math.log(10)
    u = 3.0
    for _ in range(60):
        need = target + 2 * R * math.log(u) + 4.5 * u + math.log(4 * math.pi ** 2)
        u_new = 0.5 * math.log(need / math.pi)
        if abs(u_new - u) < 1e-9:
            break
        u = u_new
    return u + 0.1


def xi_r_table(R: int, ctx: PrecisionContext) -> XiCoefficients:
    """Compute xi_r for r = 0..R by tanh-sinh moment quadrature.

    The rule level doubles until the moment vector changes by less than the
    target relative tolerance; raises QuadratureError (with the achieved
    error) if the level cap is hit first.
    """
    if R < 0:
        raise PrecisionRefusal("xi_r_table: R must be >= 0")
    with ctx.workdps():
        dps = ctx.dps
        U = _choose_upper_limit(R, dps)
        target = mpf(10) ** (-(ctx.digits + ctx.guard_digits - 4))
        # float64 prescreen data: log contribution per node, log u per node
        us, cws, log_c, log_u = [], [], [], []

        def add_nodes(new, h_scale):
            for u, w_t in new:
                f = phi_weight(u, ctx)
                c = w_t * f  # h and U/2 applied at summation time
                us.append(u)
                cws.append(c)
                log_c.append(max(float(mp.log(c)) if c > 0 else -1e15, -1e15))
                log_u.append(max(float(mp.log(u)), -1e15))

        half = mpf(U) / 2
        prev = None
        achieved = None
        level = _START_LEVEL
        h, new = _tanh_sinh_increment(U, level, dps + 25, known=False)
        add_nodes(new, h)
        while True:
            moments = _moment_vector(R, us, cws, log_c, log_u, h, half, dps)
            if prev is not None:
                achieved = max(
                    float(abs(m - p) / m) if m > 0 else 1.0
                    for m, p in zip(moments, prev)
                )
                if achieved < float(target):
                    break
            prev = moments
            level += 1
            if level > _MAX_LEVEL:
                raise QuadratureError(
                    "xi_r_table: tanh-sinh did not reach rel. tol %s by level %d "
                    "(achieved %s)" % (mp.nstr(target, 3), _MAX_LEVEL, achieved),
                    achieved=achieved,
                )
            h, new = _tanh_sinh_increment(U, level, dps + 25, known=True)
            add_nodes(new, h)

        values = tuple(2 * m / factorial(2 * r) for r, m in enumerate(moments))
        table = XiCoefficients(
            values=values, R=R, method="quadrature", digits=ctx.digits,
            ctx=ctx, quad_error=achieved if achieved is not None else float(target),
        )
        _validate_table(table, ctx)
        return table


def _moment_vector(R, us, cws, log_c, log_u, h, half, dps):
    """All moments int Phi u^(2r) du from the current node set.

    A float64 prescreen keeps, per r, only nodes within (dps+18) decades of
    the largest contribution; the discarded positive mass is provably below
    node_count * 10^-(dps+18) of the total.
    """
    lc = np.asarray(log_c)
    lu = np.asarray(log_u)
    cut = (dps + 18) * math.log(10)
    scale = h * half
    moments = []
    for r in range(R + 1):
        lv = lc + (2 * r) * lu
        keep = np.nonzero(lv > lv.max() - cut)[0]
        s = mp.zero
        for k in keep:
            s += cws[k] * us[k] ** (2 * r)
        moments.append(s * scale)
    return moments


def _validate_table(table: XiCoefficients, ctx: PrecisionContext):
    """Structural checks: xi_0 anchor and the 2 xi(1) = 1 sum rule.

    The sum rule tolerance includes the rigorous geometric bound
    (2/3) xi_R 4^-R for the discarded r > R tail (xi_r is decreasing).
    """
    places = min(ctx.digits, 20)
    ref = ctx.mpf(XI0_REFERENCE)
    if abs(table.values[0] - ref) > mpf(10) ** (-places):
        raise InvariantViolation(
            "xi_0 = %s fails the %d-place anchor %s"
            % (mp.nstr(table.values[0], places + 2), places, XI0_REFERENCE)
        )
    unity = 2 * sum(table.values[r] / mpf(4) ** r for r in range(table.R + 1))
    tail = 2 * table.values[table.R] / mpf(4) ** table.R / 3
    if abs(unity - 1) > ctx.tail_tol + tail:
        raise InvariantViolation(
            "2 sum xi_r/4^r = %s misses 1 beyond tolerance" % mp.nstr(unity, 25)
        )


def _certify_tail(table: XiCoefficients, rho2, tol):
    """Geometric bound on the series tail past R at squared radius rho2.

    Uses the observed (decreasing) term ratio; refuses when the tail ratio
    is not safely below 1 or the bound exceeds ``tol``.
    """
    R = table.R
    if R < 5:
        raise PrecisionRefusal("evaluation needs a longer xi_r table (R >= 5)")
    q = table.tail_ratio_bound() * rho2
    last = table.values[R] * rho2 ** R
    if q >= mpf("0.5"):
        raise PrecisionRefusal(
            "truncation order R=%d insufficient at |s-1/2| = %s (tail ratio %s)"
            % (R, mp.nstr(mp.sqrt(rho2), 8), mp.nstr(q, 4))
        )
    bound = last * q / (1 - q)
    if bound > tol:
        raise PrecisionRefusal(
            "series tail bound %s exceeds tolerance %s at |s-1/2| = %s (R=%d)"
            % (mp.nstr(bound, 4), mp.nstr(tol, 4), mp.nstr(mp.sqrt(rho2), 8), R)
        )


def xi_eval(s, table: XiCoefficients):
    """xi(s) = sum_r xi_r (s - 1/2)^(2r), certified against truncation.

    Terms are accumulated with a running magnitude maximum; summation stops
    early once terms fall below working epsilon relative to that maximum.
    """
    ctx = table.ctx
    with ctx.workdps():
        s = mp.mpmathify(s)
        z = (s - mpf(1) / 2) ** 2
        rho2 = abs(z)
        _certify_tail(table, rho2, ctx.tail_tol)
        eps = mpf(10) ** (-ctx.dps - 6)
        acc = mp.zero
        peak = mp.zero
        p = mp.one
        small = 0
        for r in range(table.R + 1):
            term = table.values[r] * p
            acc += term
            mag = abs(term)
            if mag > peak:
                peak = mag
            if r > 1 and mag < eps * peak:
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            p *= z
        return acc


def xi_pm_eval(s, table: XiCoefficients):
    """(xi_plus(s), xi_minus(s)) = sum_r xi_r [s^(2r) +- (s-1)^(2r)].

    xi_plus = xi(s+1/2) + xi(s-1/2) is even under s -> 1-s, xi_minus the
    odd counterpart; both vanish only on Re(s) = 1/2.
    """
    ctx = table.ctx
    with ctx.workdps():
        s = mp.mpmathify(s)
        z1 = s * s
        z2 = (s - 1) * (s - 1)
        rho2 = max(abs(z1), abs(z2))
        _certify_tail(table, rho2, ctx.tail_tol)
        eps = mpf(10) ** (-ctx.dps - 6)
        p1 = mp.one
        p2 = mp.one
        plus = mp.zero
        minus = mp.zero
        peak = mp.zero
        small = 0
        for r in range(table.R + 1):
            t1 = table.values[r] * p1
            t2 = table.values[r] * p2
            plus += t1 + t2
            minus += t1 - t2
            mag = abs(t1) + abs(t2)
            if mag > peak:
                peak = mag
            if r > 1 and mag < eps * peak:
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            p1 *= z1
            p2 *= z2
        return plus, minus


def xi_half_shift_series(order: int, table: XiCoefficients, sign: int) -> PowerSeries:
    """Series of xi(s + sign/2) about s = 0 through s^(order-1).

    For sign = +1 this is just the even table; for sign = -1 the binomial
    expansion of (s-1)^(2r) is summed with the same tail-truncation rule as
    the even/odd coefficient sums.
    """
    ctx = table.ctx
    if (order - 1) // 2 > table.R:
        raise PrecisionRefusal(
            "order %d exceeds xi_r table with R=%d" % (order, table.R)
        )
    with ctx.workdps():
        if sign == 1:
            coeffs = [mp.zero] * order
            for r in range(0, (order - 1) // 2 + 1):
                coeffs[2 * r] = table.values[r]
            return PowerSeries(mpf(0), tuple(coeffs))
        if sign != -1:
            raise PrecisionRefusal("sign must be +1 or -1")
        coeffs = []
        for m in range(order):
            coeffs.append(_alternating_binomial_sum(table, m, ctx) * (-1) ** m)
        return PowerSeries(mpf(0), tuple(coeffs))


def _alternating_binomial_sum(table, m, ctx):
    # sum_{2r >= m} C(2r, m) xi_r, truncated once terms are negligible
    tol = ctx.tail_tol
    s = mp.zero
    small = 0
    for r in range((m + 1) // 2, table.R + 1):
        term = binomial(2 * r, m) * table.values[r]
        s += term
        if s > 0 and term < tol * s:
            small += 1
            if small >= 3:
                return s
        else:
            small = 0
    raise PrecisionRefusal(
        "xi_r table too short (R=%d) for shifted series order %d" % (table.R, m)
    )


def xi_pm_series(order: int, table: XiCoefficients):
    """(xi_plus, xi_minus) series about s = 0 via the double binomial sums.

    Coefficient of s^(2n) in xi_minus is -sum_{r>n} C(2r,2n) xi_r and of
    s^(2n+1) is +sum_{r>n} C(2r,2n+1) xi_r; xi_plus adds 2 xi_n s^(2n) and
    flips the bracket sign.
    """
    ctx = table.ctx
    if order < 1:
        raise PrecisionRefusal("order must be >= 1")
    if (order - 1) // 2 >= table.R:
        raise PrecisionRefusal(
            "order %d too large for xi_r table with R=%d" % (order, table.R)
        )
    with ctx.workdps():
        plus = [mp.zero] * order
        minus = [mp.zero] * order
        for m in range(order):
            n = m // 2
            tail = _tail_binomial_sum(table, m, n + 1, ctx)
            if m % 2 == 0:
                even = table.values[n] if n <= table.R else mp.zero
                plus[m] = 2 * even + tail
                minus[m] = -tail
            else:
                plus[m] = -tail
                minus[m] = tail
        return (PowerSeries(mpf(0), tuple(plus)), PowerSeries(mpf(0), tuple(minus)))


def _tail_binomial_sum(table, m, r0, ctx):
    # sum_{r >= r0} C(2r, m) xi_r with tail truncation
    tol = ctx.tail_tol
    s = mp.zero
    small = 0
    for r in range(r0, table.R + 1):
        term = binomial(2 * r, m) * table.values[r]
        s += term
        if s > 0 and term < tol * s:
            small += 1
            if small >= 3:
                return s
        else:
            small = 0
    raise PrecisionRefusal(
        "xi_r table too short (R=%d) for binomial tail at power %d" % (table.R, m)
    )


@dataclass(frozen=True)
class EvenOddCoefficients:
    """E_l and O_l in 2 xi(s) = 1 + sum E_l s^(2l) - sum O_l s^(2l-1)."""

    E: tuple
    O: tuple
    L: int

    def __post_init__(self):
        if any(e <= 0 for e in self.E) or any(o <= 0 for o in self.O):
            raise InvariantViolation("even/odd coefficient positivity violated")

    def two_xi_series(self, order: int) -> PowerSeries:
        """The 2 xi(s) series about s = 0 through s^(order-1)."""
        if order > 2 * self.L + 1:
            raise PrecisionRefusal("order %d exceeds available L=%d" % (order, self.L))
        coeffs = [mp.one] + [mp.zero] * (order - 1)
        for l in range(1, self.L + 1):
            if 2 * l < order:
                coeffs[2 * l] = self.E[l - 1]
            if 2 * l - 1 < order:
                coeffs[2 * l - 1] = -self.O[l - 1]
        return PowerSeries(mpf(0), tuple(coeffs))


def even_odd_coeffs(L: int, table: XiCoefficients) -> EvenOddCoefficients:
    """E_l = 2 sum_{r>=l} C(2r,2l) xi_r / 2^(2r-2l), O_l likewise at 2l-1."""
    if L > table.R:
        raise PrecisionRefusal("L=%d exceeds table R=%d" % (L, table.R))
    ctx = table.ctx
    with ctx.workdps():
        tol = ctx.tail_tol
        E, O = [], []
        for l in range(1, L + 1):
            E.append(_weighted_tail(table, 2 * l, l, tol))
            O.append(_weighted_tail(table, 2 * l - 1, l, tol))
        return EvenOddCoefficients(E=tuple(E), O=tuple(O), L=L)


def _weighted_tail(table, m, l0, tol):
    # 2 sum_{r >= l0} C(2r, m) xi_r / 2^(2r - m)
    s = mp.zero
    small = 0
    for r in range(l0, table.R + 1):
        term = binomial(2 * r, m) * table.values[r] / mpf(2) ** (2 * r - m)
        s += term
        if s > 0 and term < tol * s:
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    else:
        raise PrecisionRefusal(
            "xi_r table too short (R=%d) for even/odd index %d" % (table.R, m)
        )
    return 2 * s
