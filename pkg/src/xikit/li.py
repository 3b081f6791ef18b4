"""Li coefficients a_n via the C_{n,p} triangle and xi_r moment sums.

The expansion 2 xi(1/(1-z)) = 1 + sum a_n z^n has

    a_n = 2 sum_{p=1..n} C_{n,p} Sigma_p,    Sigma_p = sum_{r>=1} xi_r r^p / 4^r,

where the non-negative triangle C_{n,p} obeys C_{n,p} = (4/n) C_{n-1,p-1}
+ ((n-2)/n) C_{n-2,p} from C_{1,1} = 4, vanishes whenever n+p is odd, has
C_{n,n} = 4^n/n! and row sums 4n. An independent route to the same a_n
composes the binomial-ratio rows directly:

    a_n = 2 sum_{r>=0} (xi_r/4^r) * [w^n] ((1+w)/(1-w))^(2r),

since s - 1/2 = (1/2)(1+z)/(1-z) under s = 1/(1-z). The two routes are
linked by the exact polynomial identity [w^n]((1+w)/(1-w))^(2r)
= sum_p C_{n,p} r^p, which the test suite checks in exact arithmetic.

Everything here is a sum of positive terms: no cancellation anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .context import PrecisionContext
from .errors import InvariantViolation, PrecisionRefusal, XikitError
from .xi import XiCoefficients

LOG4 = math.log(4.0)
RATIONAL_LIMIT = 300   # factorial-size entries make exact mode impractical past this
SIGMA_MARGIN = 8       # extra r beyond ceil(p/log 4) required of the xi_r table

EXACT_RATIONAL = "exact-rational"
BIGFLOAT = "bigfloat"


@dataclass(frozen=True)
class CnpTable:
    """Triangle C_{n,p}, 1 <= p <= n, as a row mapping (possibly sparse in n).

    ``rows[n][p-1]`` holds C_{n,p}; entries are Fractions in exact-rational
    mode, working-precision floats in bigfloat mode. Parity-forbidden
    entries are exact zeros.
    """

    n_max: int
    arithmetic_mode: str
    rows: dict
    digits: int

    def row(self, n: int):
        try:
            return self.rows[n]
        except KeyError:
            raise PrecisionRefusal("C_{n,p} row %d not materialized (n_max=%d)"
                                   % (n, self.n_max)) from None

    def value(self, n: int, p: int):
        if not 1 <= p <= n:
            return 0
        return self.row(n)[p - 1]


def _next_row(n, prev1, prev2, four_over_n, frac_n2):
    """Row n from rows n-1, n-2; zeros stay exact int 0 in either mode."""
    row = [0] * n
    for p in range(2 if n % 2 == 0 else 1, n + 1, 2):
        v = 0
        if p >= 2:
            v = four_over_n * prev1[p - 2]
        if n - 2 >= 1 and p <= n - 2:
            v = v + frac_n2 * prev2[p - 1]
        row[p - 1] = v
    return row


def cnp_build(n_max: int, mode: str, ctx: PrecisionContext | None = None,
              keep: set | None = None) -> CnpTable:
    """Build the triangle up to n_max.

    ``keep`` restricts which rows are retained (all by default); the
    recurrence itself always walks every row. Exact-rational mode is capped
    at RATIONAL_LIMIT because entry sizes grow factorially.
    """
    if n_max < 1:
        raise PrecisionRefusal("n_max must be >= 1")
    if mode not in (EXACT_RATIONAL, BIGFLOAT):
        raise XikitError("unknown arithmetic mode %r" % mode)
    if mode == EXACT_RATIONAL and n_max > RATIONAL_LIMIT:
        raise PrecisionRefusal(
            "exact-rational mode capped at n_max = %d (requested %d)"
            % (RATIONAL_LIMIT, n_max)
        )
    if mode == BIGFLOAT and ctx is None:
        raise XikitError("bigfloat mode needs a PrecisionContext")

    digits = ctx.digits if ctx is not None else 0
    rows = {}

    def run():
        if mode == EXACT_RATIONAL:
            first = [Fraction(4)]
        else:
            first = [mpf(4)]
        prev2, prev1 = None, first
        if keep is None or 1 in keep:
            rows[1] = tuple(first)
        for n in range(2, n_max + 1):
            if mode == EXACT_RATIONAL:
                c4, cn2 = Fraction(4, n), Fraction(n - 2, n)
            else:
                c4, cn2 = mpf(4) / n, mpf(n - 2) / n
            row = _next_row(n, prev1, prev2, c4, cn2)
            if keep is None or n in keep:
                rows[n] = tuple(row)
            prev2, prev1 = prev1, row

    if mode == BIGFLOAT:
        with ctx.workdps():
            run()
    else:
        run()
    table = CnpTable(n_max=n_max, arithmetic_mode=mode, rows=rows, digits=digits)
    _validate_cnp(table, ctx)
    return table


def _validate_cnp(table: CnpTable, ctx):
    """Parity zeros, diagonal 4^n/n!, row sums 4n (exact or within tolerance)."""
    exact = table.arithmetic_mode == EXACT_RATIONAL
    tol = None if exact else ctx.tail_tol

    def check():
        for n, row in table.rows.items():
            for p in range(1, n + 1):
                v = row[p - 1]
                if (n + p) % 2 == 1:
                    if v != 0:
                        raise InvariantViolation("C_{%d,%d} nonzero off parity" % (n, p))
                elif not v > 0:
                    raise InvariantViolation("C_{%d,%d} not positive" % (n, p))
            diag = row[n - 1]
            rowsum = sum(row)
            if exact:
                if diag != Fraction(4 ** n, math.factorial(n)):
                    raise InvariantViolation("C_{%d,%d} != 4^n/n!" % (n, n))
                if rowsum != 4 * n:
                    raise InvariantViolation("row %d sum != 4n" % n)
            else:
                expected = mpf(4) ** n / mp.factorial(n)
                if abs(diag / expected - 1) > tol:
                    raise InvariantViolation("C_{%d,%d} misses 4^n/n!" % (n, n))
                if abs(rowsum / (4 * n) - 1) > tol:
                    raise InvariantViolation("row %d sum misses 4n" % n)

    if exact:
        check()
    else:
        with ctx.workdps():
            check()


@dataclass(frozen=True)
class SigmaTable:
    """Moment sums Sigma_p = sum_r xi_r r^p / 4^r for p = 0..p_max."""

    values: tuple
    p_max: int
    source_digits: int
    source_R: int
    ctx: PrecisionContext

    def __post_init__(self):
        if any(v <= 0 for v in self.values):
            raise InvariantViolation("Sigma_p positivity violated")

    def value(self, p: int):
        if not 0 <= p <= self.p_max:
            raise PrecisionRefusal("Sigma_%d outside table (p_max=%d)" % (p, self.p_max))
        return self.values[p]


def sigma_required_R(p_max: int) -> int:
    return int(math.ceil(p_max / LOG4)) + SIGMA_MARGIN


def sigma_table(p_max: int, xi: XiCoefficients) -> SigmaTable:
    """Sigma_p for p = 0..p_max with certified tails.

    The r^p/4^r factor alone peaks at r = p/log 4 and is strictly
    decreasing past it (xi_r itself is decreasing), so summation may stop
    once three consecutive terms past ceil(p/log 4) drop below tail_tol of
    the running sum. If the table's R cannot reach that point the request
    is refused.
    """
    if p_max < 0:
        raise PrecisionRefusal("p_max must be >= 0")
    need = sigma_required_R(p_max)
    if xi.R < need:
        raise PrecisionRefusal(
            "Sigma table to p=%d needs xi_r through R>=%d, table has R=%d"
            % (p_max, need, xi.R)
        )
    ctx = xi.ctx
    with ctx.workdps():
        R = xi.R
        inv4 = [xi.values[r] / mpf(4) ** r for r in range(R + 1)]
        cutoff = mpf(10) ** (-ctx.dps - 5)
        out = [sum(inv4[r] for r in range(1, R + 1))]  # p = 0
        powr = [mp.one] * (R + 1)
        for p in range(1, p_max + 1):
            rstar = int(math.ceil(p / LOG4))
            s = mp.zero
            below = 0
            for r in range(1, R + 1):
                powr[r] = powr[r] * r
                if below < 3:
                    term = inv4[r] * powr[r]
                    s += term
                    if r > rstar:
                        below = below + 1 if term < cutoff * s else 0
            if below < 3:
                raise PrecisionRefusal(
                    "Sigma_%d tail not negligible by r=%d; extend the xi_r table" % (p, R)
                )
            out.append(s)
        table = SigmaTable(values=tuple(out), p_max=p_max,
                           source_digits=xi.digits, source_R=xi.R, ctx=ctx)
        _validate_sigma(table, xi)
        return table


def _validate_sigma(table: SigmaTable, xi: XiCoefficients):
    ctx = table.ctx
    with ctx.workdps():
        direct = mpf(1) / 2 - xi.values[0]
        if abs(table.values[0] - direct) > ctx.tail_tol:
            raise InvariantViolation("Sigma_0 != 1/2 - xi_0 beyond tolerance")
        for p in range(1, table.p_max):
            if not table.values[p + 1] > table.values[p]:
                raise InvariantViolation("Sigma_p not strictly increasing at p=%d" % p)


@dataclass(frozen=True)
class LiCoefficients:
    """a_n for n = 1..N; values[n-1] = a_n."""

    values: tuple
    N: int
    method: str    # "cnp-sum" | "oracle-composition"
    digits: int
    ctx: PrecisionContext

    def __post_init__(self):
        if any(v <= 0 for v in self.values):
            raise InvariantViolation("a_n positivity violated")

    def value(self, n: int):
        if not 1 <= n <= self.N:
            raise PrecisionRefusal("a_%d outside table (N=%d)" % (n, self.N))
        return self.values[n - 1]


def a1_closed_form(ctx: PrecisionContext):
    """a_1 = 1 + euler/2 - log(4 pi)/2, the only closed-form anchor needed."""
    with ctx.workdps():
        return 1 + mp.euler / 2 - mp.log(4 * mp.pi) / 2


def li_an(N: int, cnp: CnpTable, sig: SigmaTable) -> LiCoefficients:
    """a_n = 2 sum_p C_{n,p} Sigma_p for n = 1..N from prebuilt tables."""
    if cnp.n_max < N or sig.p_max < N:
        raise PrecisionRefusal(
            "tables too small: need n_max,p_max >= %d (have %d, %d)"
            % (N, cnp.n_max, sig.p_max)
        )
    ctx = sig.ctx
    rational = cnp.arithmetic_mode == EXACT_RATIONAL
    with ctx.workdps():
        vals = []
        for n in range(1, N + 1):
            row = cnp.row(n)
            s = mp.zero
            for p in range(2 if n % 2 == 0 else 1, n + 1, 2):
                c = row[p - 1]
                if rational:
                    c = mpf(c.numerator) / c.denominator
                s += c * sig.values[p]
            vals.append(2 * s)
        return LiCoefficients(values=tuple(vals), N=N, method="cnp-sum",
                              digits=sig.source_digits, ctx=ctx)


def li_an_streaming(N: int, sig: SigmaTable, ctx: PrecisionContext,
                    keep_rows: set | None = None):
    """a_n for n = 1..N walking the C recurrence without storing the triangle.

    Returns (LiCoefficients, CnpTable with the requested rows). Memory cost
    is two rows; used for desk scales where the full triangle is bulky.
    """
    if sig.p_max < N:
        raise PrecisionRefusal("Sigma table p_max=%d < N=%d" % (sig.p_max, N))
    keep_rows = keep_rows or set()
    rows = {}
    with ctx.workdps():
        vals = [2 * mpf(4) * sig.values[1]]
        prev2, prev1 = None, [mpf(4)]
        if 1 in keep_rows:
            rows[1] = tuple(prev1)
        top = max([N] + [n for n in keep_rows])
        for n in range(2, top + 1):
            row = _next_row(n, prev1, prev2, mpf(4) / n, mpf(n - 2) / n)
            if n <= N:
                s = mp.zero
                for p in range(2 if n % 2 == 0 else 1, n + 1, 2):
                    s += row[p - 1] * sig.values[p]
                vals.append(2 * s)
            if n in keep_rows:
                rows[n] = tuple(row)
            prev2, prev1 = prev1, row
        li = LiCoefficients(values=tuple(vals), N=N, method="cnp-sum",
                            digits=sig.source_digits, ctx=ctx)
        cnp = CnpTable(n_max=top, arithmetic_mode=BIGFLOAT, rows=rows, digits=ctx.digits)
        if rows:
            _validate_cnp(cnp, ctx)
        return li, cnp


def _binomial_ratio_square_rows(N: int, r_max: int):
    """Yield exact integer rows [w^n]((1+w)/(1-w))^(2r) for r = 1..r_max."""
    B2 = [1] + [4 * k for k in range(1, N + 1)]  # ((1+w)/(1-w))^2
    P = [1] + [0] * N
    for _ in range(r_max):
        P = [sum(P[i] * B2[k - i] for i in range(k + 1)) for k in range(N + 1)]
        yield P


def an_oracle(N: int, xi: XiCoefficients) -> LiCoefficients:
    """a_n assembled directly from 2 sum_r (xi_r/4^r) ((1+w)/(1-w))^(2r).

    Independent of the C_{n,p}/Sigma_p route; exact integer rows keep the
    composition free of coefficient-level roundoff. Same conservative stop
    rule as the Sigma sums, with the peak bound taken at p = N.
    """
    need = sigma_required_R(N)
    if xi.R < need:
        raise PrecisionRefusal(
            "oracle to n=%d needs xi_r through R>=%d, table has R=%d"
            % (N, need, xi.R)
        )
    ctx = xi.ctx
    with ctx.workdps():
        cutoff = mpf(10) ** (-ctx.dps - 5)
        rstar = int(math.ceil(N / LOG4))
        acc = [mp.zero] * (N + 1)
        below = 0
        converged = False
        for r, row in enumerate(_binomial_ratio_square_rows(N, xi.R), start=1):
            w = 2 * xi.values[r] / mpf(4) ** r
            all_small = True
            for n in range(1, N + 1):
                t = w * row[n]
                acc[n] += t
                if t >= cutoff * acc[n]:
                    all_small = False
            if r > rstar:
                below = below + 1 if all_small else 0
                if below >= 3:
                    converged = True
                    break
        if not converged:
            raise PrecisionRefusal(
                "oracle tail not negligible by r=%d; extend the xi_r table" % xi.R
            )
        return LiCoefficients(values=tuple(acc[1:]), N=N,
                              method="oracle-composition", digits=xi.digits, ctx=ctx)


@dataclass(frozen=True)
class BoundsReport:
    """Outcome of the inequality battery over a computed a_n table."""

    N: int
    checks: tuple        # (name, count) pairs actually evaluated
    violations: tuple    # (name, n, detail) triples

    @property
    def ok(self) -> bool:
        return not self.violations


def an_bounds_check(li: LiCoefficients, sig: SigmaTable) -> BoundsReport:
    """Inequality battery for the a_n.

    For n >= 2: n a_1 < a_n; the companion upper bound a_n < 8 n Sigma_n is
    strict only from n = 3 on -- at n = 2 the sum 2 C_{2,2} Sigma_2 with
    C_{2,2} = 8 makes a_2 = 16 Sigma_2 an exact identity, checked as such.
    Then the recurrence-derived chain: a_n > (4/n) a_{n-1} + ((n-2)/n) a_{n-2},
    a_n > ((n+2)/n) min(a_{n-1}, a_{n-2}), the even/odd product forms
    a_{2n} > ((n+1)/2) a_2 and a_{2n-1} > ((2n+1)/3) a_1, monotone growth,
    and the quadratic partial-sum lower bound sum a_n > a_1 N(N+1)/2.
    """
    ctx = li.ctx
    if sig.p_max < li.N:
        raise PrecisionRefusal("Sigma table too short for bounds check")
    violations = []
    checks = []
    with ctx.workdps():
        a = (None,) + li.values
        N = li.N
        tol = ctx.tail_tol

        cnt = 0
        for n in range(2, N + 1):
            cnt += 1
            if not n * a[1] < a[n]:
                violations.append(("lower_na1", n, mp.nstr(a[n], 20)))
            if n == 2:
                if abs(a[2] / (16 * sig.values[2]) - 1) > tol:
                    violations.append(("a2_identity_16sigma2", 2, mp.nstr(a[2], 20)))
            elif not a[n] < 8 * n * sig.values[n]:
                violations.append(("upper_8n_sigma", n, mp.nstr(a[n], 20)))
        checks.append(("pair_bounds", cnt))

        cnt = 0
        for n in range(2, N + 1):
            cnt += 1
            if not a[n] > a[n - 1]:
                violations.append(("monotone", n, mp.nstr(a[n], 20)))
        checks.append(("monotone", cnt))

        cnt = 0
        for n in range(3, N + 1):
            cnt += 1
            if not a[n] > mpf(4) / n * a[n - 1] + mpf(n - 2) / n * a[n - 2]:
                violations.append(("recurrence_lower", n, mp.nstr(a[n], 20)))
            if not a[n] > mpf(n + 2) / n * min(a[n - 1], a[n - 2]):
                violations.append(("weak_lower", n, mp.nstr(a[n], 20)))
        checks.append(("recurrence_chain", cnt))

        cnt = 0
        for m in range(2, N // 2 + 1):
            cnt += 1
            if not a[2 * m] > mpf(m + 1) / 2 * a[2]:
                violations.append(("even_product", 2 * m, mp.nstr(a[2 * m], 20)))
        for m in range(2, (N + 1) // 2 + 1):
            if 2 * m - 1 <= N:
                cnt += 1
                if not a[2 * m - 1] > mpf(2 * m + 1) / 3 * a[1]:
                    violations.append(("odd_product", 2 * m - 1, mp.nstr(a[2 * m - 1], 20)))
        checks.append(("product_forms", cnt))

        partial = mp.zero
        for n in range(1, N + 1):
            partial += a[n]
        if not partial > a[1] * N * (N + 1) / 2:
            violations.append(("partial_sum_quadratic", N, mp.nstr(partial, 20)))
        checks.append(("partial_sum", 1))

    return BoundsReport(N=li.N, checks=tuple(checks), violations=tuple(violations))


def an_recurrence_residual(li: LiCoefficients, cnp: CnpTable, sig: SigmaTable, n: int):
    """a_n - (4/n) a_{n-1} - ((n-2)/n) a_{n-2} - (8/n) sum_p C_{n-1,p-1} (Sigma_p - Sigma_{p-1}).

    Exactly zero in exact arithmetic; the contract is |residual| below
    10^-(digits-10) relative to a_n.
    """
    if not 3 <= n <= li.N:
        raise PrecisionRefusal("residual needs 3 <= n <= N")
    ctx = li.ctx
    rational = cnp.arithmetic_mode == EXACT_RATIONAL
    with ctx.workdps():
        row = cnp.row(n - 1)
        corr = mp.zero
        for p in range(2, n + 1):
            c = row[p - 2] if p - 1 <= n - 1 else 0
            if c == 0:
                continue
            if rational:
                c = mpf(c.numerator) / c.denominator
            corr += c * (sig.values[p] - sig.values[p - 1])
        return (li.value(n) - mpf(4) / n * li.value(n - 1)
                - mpf(n - 2) / n * li.value(n - 2) - mpf(8) / n * corr)
