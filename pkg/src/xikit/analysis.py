"""Scans, inequality verification, dip localization and asymptotic fits.

Real-axis scans check the sandwich orderings xi(s+1/2) > xi(s) > xi(s-1/2)
> 0, xi_plus > xi > xi_minus > 0 and the same chain for the logarithms;
circle scans sample the three functions along s = 1/2 + i t (the image of
the unit circle under s = 1/(1-z)) and localize zeros as dips of log|f|.
On that line 2 xi is real and xi_plus/xi_minus are real/imaginary up to a
phase, so |f| has local minima only at zeros: every sampled local minimum
is golden-section refined and then classified by its refined depth.

Fits are ordinary least squares at working precision via normal equations;
they are used for the log a_n / n line, the C_{n,p} row profile and
synthetic-model recovery tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import atan, cos, exp, log, mp, mpc, mpf, sin, sqrt

from .errors import PrecisionRefusal
from .li import CnpTable, LiCoefficients, SigmaTable
from .xi import XiCoefficients, xi_eval, xi_pm_eval


@dataclass(frozen=True)
class ScanEvent:
    kind: str               # "dip" | "sign-change" | "inequality-violation"
    function: str
    location: object        # scan parameter where flagged
    refined_location: object


@dataclass(frozen=True)
class ScanReport:
    path: str               # "real-axis" | "unit-circle"
    lo: object
    hi: object
    step: object
    columns: tuple          # value column names
    samples: tuple          # rows: (parameter,) + values
    events: tuple           # ScanEvent, sorted by location

    def events_of(self, kind, function=None):
        return tuple(e for e in self.events
                     if e.kind == kind and (function is None or e.function == function))


@dataclass(frozen=True)
class FitResult:
    model: str
    parameters: dict
    residual_rms: object
    range: tuple
    sample_count: int


def _lsq(rows, ys):
    """Least squares at working precision via normal equations."""
    k = len(rows[0])
    if len(rows) < k + 1:
        raise PrecisionRefusal("need at least %d samples for a %d-parameter fit"
                               % (k + 1, k))
    ata = mp.matrix(k, k)
    aty = mp.matrix(k, 1)
    for row, y in zip(rows, ys):
        for i in range(k):
            aty[i] += row[i] * y
            for j in range(k):
                ata[i, j] += row[i] * row[j]
    sol = mp.lu_solve(ata, aty)
    rss = mp.zero
    for row, y in zip(rows, ys):
        r = y - sum(sol[i] * row[i] for i in range(k))
        rss += r * r
    return sol, sqrt(rss / len(rows))


def sandwich_scan_real(grid, xi: XiCoefficients) -> ScanReport:
    """Verify the three orderings on a sigma grid; violations become events.

    ``grid`` is (lo, hi, step). The shifted-argument chain requires
    sigma >= 3/2; the combination and log chains sigma >= 1. The log chain
    checks the ordering of the logarithms (their common positivity is the
    sigma >= 1 chain itself; log xi(1) = -log 2 < 0, so positivity of the
    logs is not part of the contract).
    """
    lo, hi, step = grid
    ctx = xi.ctx
    with ctx.workdps():
        lo, hi, step = mpf(lo), mpf(hi), mpf(step)
        if not (hi > lo and step > 0):
            raise PrecisionRefusal("bad grid")
        columns = ("xi_minus_half", "xi", "xi_plus_half", "xi_plus", "xi_minus",
                   "log_xi_plus", "log_xi", "log_xi_minus")
        rows = []
        events = []
        sigma = lo
        while sigma <= hi + step / 2:
            f = xi_eval(sigma, xi)
            fp = xi_eval(sigma + mpf(1) / 2, xi)
            fm = xi_eval(sigma - mpf(1) / 2, xi)
            xp, xm = xi_pm_eval(sigma, xi)
            ok_log = xp > 0 and f > 0 and xm > 0
            rows.append((sigma, fm, f, fp, xp, xm,
                         log(xp) if ok_log else mp.nan,
                         log(f) if f > 0 else mp.nan,
                         log(xm) if xm > 0 else mp.nan))
            if sigma >= mpf(3) / 2 and not (fp > f > fm > 0):
                events.append(ScanEvent("inequality-violation", "shifted_chain", sigma, sigma))
            if sigma >= 1:
                if not (xp > f > xm > 0):
                    events.append(ScanEvent("inequality-violation", "combination_chain",
                                            sigma, sigma))
                if not (ok_log and log(xp) > log(f) > log(xm)):
                    events.append(ScanEvent("inequality-violation", "log_chain", sigma, sigma))
            sigma += step
        return ScanReport("real-axis", lo, hi, step, columns, tuple(rows), tuple(events))


def theta_for_height(t):
    """Angle on the unit circle whose image s = 1/(1-e^(i theta)) has Im s = t."""
    return 2 * atan(1 / (2 * mpf(t)))


def circle_scan(theta_range, steps: int, xi: XiCoefficients,
                depth: float = 3.0, refine_tol="1e-8") -> ScanReport:
    """Sample log|2 xi|, log|xi_plus|, log|xi_minus| along the unit circle.

    s = 1/(1 - e^(i theta)) = 1/2 + (i/2) cot(theta/2); samples are uniform
    in t = Im s. Every local minimum of |f| is golden-section refined in t;
    a refined minimum counting ``depth`` (natural log) below the median of
    its 20-sample neighborhood is recorded as a dip event.
    """
    th_lo, th_hi = theta_range
    ctx = xi.ctx
    if steps < 5:
        raise PrecisionRefusal("steps must be >= 5")
    with ctx.workdps():
        th_lo, th_hi = mpf(th_lo), mpf(th_hi)
        if not 0 < th_lo < th_hi:
            raise PrecisionRefusal("theta range must avoid the pole at 0")
        # uniform grid in t (descending theta)
        t_hi = mp.cot(th_lo / 2) / 2
        t_lo = mp.cot(th_hi / 2) / 2
        step = (t_hi - t_lo) / (steps - 1)
        ts, vals = [], {"two_xi": [], "xi_plus": [], "xi_minus": []}
        for k in range(steps):
            t = t_lo + step * k
            s = mpc(mpf(1) / 2, t)
            ts.append(t)
            v = xi_eval(s, xi)
            xp, xm = xi_pm_eval(s, xi)
            vals["two_xi"].append(abs(2 * v))
            vals["xi_plus"].append(abs(xp))
            vals["xi_minus"].append(abs(xm))
        columns = ("t", "log_abs_two_xi", "log_abs_xi_plus", "log_abs_xi_minus")
        rows = tuple(
            (theta_for_height(ts[k]), ts[k],
             log(vals["two_xi"][k]), log(vals["xi_plus"][k]), log(vals["xi_minus"][k]))
            for k in range(steps)
        )
        events = []
        evaluators = {
            "two_xi": lambda t: abs(2 * xi_eval(mpc(mpf(1) / 2, t), xi)),
            "xi_plus": lambda t: abs(xi_pm_eval(mpc(mpf(1) / 2, t), xi)[0]),
            "xi_minus": lambda t: abs(xi_pm_eval(mpc(mpf(1) / 2, t), xi)[1]),
        }
        for name, series in vals.items():
            logs = [float(log(v)) for v in series]
            for i in range(1, steps - 1):
                if series[i] <= series[i - 1] and series[i] < series[i + 1]:
                    refined = _golden_min(evaluators[name], ts[i - 1], ts[i + 1],
                                          mpf(refine_tol))
                    ref_val = evaluators[name](refined)
                    lo_i, hi_i = max(0, i - 10), min(steps, i + 11)
                    med = sorted(logs[lo_i:hi_i])[(hi_i - lo_i) // 2]
                    if float(log(ref_val)) <= med - depth:
                        events.append(ScanEvent("dip", name, ts[i], refined))
        events.sort(key=lambda e: e.location)
        return ScanReport("unit-circle", th_lo, th_hi, step, columns, rows, tuple(events))


def _golden_min(f, a, b, tol):
    g = (sqrt(5) - 1) / 2
    x1 = b - g * (b - a)
    x2 = a + g * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - g * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (b - a)
            f2 = f(x2)
    return (a + b) / 2


def fit_log_an(li: LiCoefficients, n_range) -> FitResult:
    """OLS line for log(a_n)/n against log n over [lo, hi]."""
    lo, hi = n_range
    if not (2 <= lo < hi <= li.N):
        raise PrecisionRefusal("fit range must satisfy 2 <= lo < hi <= N")
    with li.ctx.workdps():
        rows, ys = [], []
        for n in range(lo, hi + 1):
            rows.append((mp.one, log(n)))
            ys.append(log(li.values[n - 1]) / n)
        sol, rms = _lsq(rows, ys)
        return FitResult("log_an_over_n ~ c0 + c1*log(n)",
                         {"c0": sol[0], "c1": sol[1]}, rms, (lo, hi), len(ys))


@dataclass(frozen=True)
class AsymReport:
    ratios: tuple          # (n, log a_n / (15 n / log^3 n))
    lo: int
    hi: int

    @property
    def min_ratio(self):
        return min(r for _, r in self.ratios)

    @property
    def max_ratio(self):
        return max(r for _, r in self.ratios)


def asym_formula(n):
    """The simple growth model 15 n / log(n)^3 for log a_n."""
    return 15 * mpf(n) / log(mpf(n)) ** 3


def asym_check(li: LiCoefficients, n_range) -> AsymReport:
    lo, hi = n_range
    if not (2 <= lo <= hi <= li.N):
        raise PrecisionRefusal("range outside computed a_n")
    with li.ctx.workdps():
        out = tuple((n, log(li.values[n - 1]) / asym_formula(n)) for n in range(lo, hi + 1))
        return AsymReport(ratios=out, lo=lo, hi=hi)


def jm_scan(li: LiCoefficients, n_max: int):
    """argmax_j a_j (1 - 1/n)^j for each integer n <= n_max.

    Refuses when the maximizer for some n is not interior to the available
    a_j range (j_m = N would be a truncation artifact, not a maximum).
    """
    if n_max < 2:
        raise PrecisionRefusal("n_max must be >= 2")
    ctx = li.ctx
    out = []
    with ctx.workdps():
        for n in range(2, n_max + 1):
            z = 1 - mpf(1) / n
            best, bj = mp.zero, 0
            p = mp.one
            for j in range(1, li.N + 1):
                p *= z
                v = li.values[j - 1] * p
                if v > best:
                    best, bj = v, j
            if bj >= li.N:
                raise PrecisionRefusal(
                    "summand maximizer at the a_j boundary for n=%d (N=%d); "
                    "more a_j needed" % (n, li.N)
                )
            out.append((n, bj))
    return tuple(out)


def pa_table(cnp: CnpTable, sig: SigmaTable, n_list):
    """Peak diagnostics of the summand C_{n,p} Sigma_p for each requested n.

    Row: (n, p_a, log summand at the peak, log Sigma_{p_a}, one-sided
    difference log Sigma_{p_a + 1} - log Sigma_{p_a}). The summand is
    unimodal in p; the scan stops once it has decreased for 40 consecutive
    admissible p past the running maximum, and refuses if the maximum sits
    on the available boundary.
    """
    ctx = sig.ctx
    rows = []
    with ctx.workdps():
        for n in n_list:
            row = cnp.row(n)
            pstart = 2 if n % 2 == 0 else 1
            best_p, best_log = None, None
            drops = 0
            p_hi = min(n, sig.p_max)
            for p in range(pstart, p_hi + 1, 2):
                c = row[p - 1]
                if c == 0:
                    continue
                if cnp.arithmetic_mode == "exact-rational":
                    c = mpf(c.numerator) / c.denominator
                lv = log(c) + log(sig.values[p])
                if best_log is None or lv > best_log:
                    best_p, best_log = p, lv
                    drops = 0
                else:
                    drops += 1
                    if drops >= 40:
                        break
            else:
                if p_hi < n:
                    raise PrecisionRefusal(
                        "summand still rising at Sigma boundary p=%d for n=%d"
                        % (p_hi, n)
                    )
            if best_p is None or best_p >= p_hi - 1:
                raise PrecisionRefusal("summand peak not interior for n=%d" % n)
            if best_p + 1 > sig.p_max:
                raise PrecisionRefusal("Sigma table too short for the difference at p_a")
            nd = log(sig.values[best_p + 1]) - log(sig.values[best_p])
            rows.append((n, best_p, best_log, log(sig.values[best_p]), nd))
    return tuple(rows)


def cnp_peak_scan(cnp: CnpTable, n_range):
    """(n, p_m, C_{n,p_m}) for each materialized n in the range."""
    lo, hi = n_range
    out = []
    for n in range(lo, hi + 1):
        if n not in cnp.rows:
            continue
        row = cnp.rows[n]
        pstart = 2 if n % 2 == 0 else 1
        best_p = max(range(pstart, n + 1, 2), key=lambda p: row[p - 1])
        out.append((n, best_p, row[best_p - 1]))
    if not out:
        raise PrecisionRefusal("no materialized rows in range %s" % (n_range,))
    return tuple(out)


def peak_value_model(n):
    """Empirical straight-line model for the row peak value C_{n,p_m}."""
    return mpf("0.78237057") * n + mpf("151.978136")


def cnp_fit(cnp: CnpTable, n: int, p_range) -> FitResult:
    """OLS fit of log C_{n,p} ~ a x log x + b x + c + log n with x = p - log n.

    Uses admissible-parity p in [p_lo, p_hi]; requires x > 0 throughout.
    """
    p_lo, p_hi = p_range
    row = cnp.row(n)
    ctx_digits = cnp.digits or 30
    with mp.workdps(ctx_digits + 10):
        lgn = log(mpf(n))
        if not (1 <= p_lo < p_hi <= n):
            raise PrecisionRefusal("bad p range")
        if mpf(p_lo) <= lgn:
            raise PrecisionRefusal("p range must start above log n")
        pstart = p_lo + ((p_lo + n) % 2)
        rows, ys = [], []
        for p in range(pstart, p_hi + 1, 2):
            c = row[p - 1]
            if c == 0:
                continue
            if cnp.arithmetic_mode == "exact-rational":
                c = mpf(c.numerator) / c.denominator
            x = mpf(p) - lgn
            rows.append((x * log(x), x, mp.one))
            ys.append(log(c) - lgn)
        sol, rms = _lsq(rows, ys)
        return FitResult("log_Cnp - log n ~ a*x*log x + b*x + c, x = p - log n",
                         {"a": sol[0], "b": sol[1], "c": sol[2]},
                         rms, (p_lo, p_hi), len(ys))


@dataclass(frozen=True)
class CollapseReport:
    n_list: tuple
    pair_distances: tuple   # ((n1, n2), sup distance of C/n curves on shared x window)
    sum_checks: tuple       # (n, sum_p C_{n,p}/n) -- must equal 4
    stirling_n: int
    stirling_defect: object # | log(4^n/(n! n)) - expansion | at stirling_n


def stirling_form(n):
    """-n log n + (1 + log 4) n - (3/2) log n - (1/2) log(2 pi) - 1/(12 n)."""
    n = mpf(n)
    return (-n * log(n) + (1 + log(4)) * n - mpf(3) / 2 * log(n)
            - log(2 * mp.pi) / 2 - 1 / (12 * n))


def continuum_collapse(cnp: CnpTable, n_list, stirling_n: int = 50) -> CollapseReport:
    """Overlay C_{n,p}/n against x = p - 2 log n across the given n.

    Curves are compared by linear interpolation on the shared x window;
    the sup distance per pair quantifies the collapse onto a single
    profile. Also re-checks sum_p C_{n,p}/n = 4 per n and the Stirling
    expansion of log(4^n/(n! n)).
    """
    n_list = tuple(n_list)
    if len(set(n_list)) != len(n_list) or any(n < 100 for n in n_list):
        raise PrecisionRefusal("n_list must be distinct values >= 100")
    digits = cnp.digits or 30
    with mp.workdps(digits + 10):
        curves = {}
        sums = []
        for n in n_list:
            row = cnp.row(n)
            shift = 2 * log(mpf(n))
            pstart = 2 if n % 2 == 0 else 1
            xs, ys = [], []
            total = mp.zero
            for p in range(pstart, n + 1, 2):
                v = row[p - 1]
                if cnp.arithmetic_mode == "exact-rational":
                    v = mpf(v.numerator) / v.denominator
                total += v
                xs.append(mpf(p) - shift)
                ys.append(v / n)
            curves[n] = (xs, ys)
            sums.append((n, total / n))
        pairs = []
        for i in range(len(n_list)):
            for j in range(i + 1, len(n_list)):
                pairs.append(((n_list[i], n_list[j]),
                              _sup_distance(curves[n_list[i]], curves[n_list[j]])))
        defect = abs(log(mpf(4) ** stirling_n / (mp.factorial(stirling_n) * stirling_n))
                     - stirling_form(stirling_n))
        return CollapseReport(n_list=n_list, pair_distances=tuple(pairs),
                              sum_checks=tuple(sums), stirling_n=stirling_n,
                              stirling_defect=defect)


def _interp(xs, ys, x):
    # xs strictly increasing; linear interpolation
    lo, hi = 0, len(xs) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    t = (x - xs[lo]) / (xs[hi] - xs[lo])
    return ys[lo] + t * (ys[hi] - ys[lo])


def _sup_distance(curve_a, curve_b):
    xa, ya = curve_a
    xb, yb = curve_b
    lo = max(xa[0], xb[0])
    hi = min(xa[-1], xb[-1])
    if hi <= lo:
        raise PrecisionRefusal("no shared x window for collapse comparison")
    best = mp.zero
    grid = [x for x in xa if lo <= x <= hi] + [x for x in xb if lo <= x <= hi]
    for x in grid:
        d = abs(_interp(xa, ya, x) - _interp(xb, yb, x))
        if d > best:
            best = d
    return best
