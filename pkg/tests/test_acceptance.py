"""Acceptance battery: one test per required criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -v -rA`` to see the PASS/FAIL
line per criterion. Criterion 12's binomial-transform clause asserts a
stated expectation (roots above 1/2, monotone decreasing on [50, 1000])
that direct computation disproves; that test documents the discrepancy and
fails honestly rather than asserting something weaker. Details sit in its
docstring and in the repository notes.
"""

import time

import pytest
from mpmath import exp, log, mp, mpc, mpf

from xikit import (PrecisionContext, an_bounds_check, an_oracle, asym_check,
                   binomial_ratio_coeffs, cnp_fit, even_odd_coeffs,
                   fit_log_an, lambda_sequence, inverse_phi_series,
                   li_an_streaming, log_xi_series, pa_table, sigma_table,
                   xi_r_table)
from xikit.cli import main
from xikit.li import a1_closed_form, sigma_required_R

from reference_values import (A_1, E_COEFFS, FIRST_ZERO_T, INVERSE_PHI,
                              LAMBDA_LI, LOG_XI_COEFFS, O_COEFFS,
                              SUMMAND_PEAKS, XI_0, matches_printed)


def _report(num, ok, detail):
    print("[criterion %s] %s - %s" % (num, "PASS" if ok else "FAIL", detail))
    return ok


def test_criterion_01_xi0_by_quadrature_under_a_minute():
    ctx = PrecisionContext(digits=50)
    t0 = time.time()
    table = xi_r_table(64, ctx)
    dt = time.time() - t0
    with ctx.workdps():
        ok = matches_printed(table.values[0], XI_0) and dt < 60
        detail = "xi_0 = %s in %.1fs (R=64, 50 digits)" % (mp.nstr(table.values[0], 22), dt)
    assert _report(1, ok, detail)


def test_criterion_02_a1_pipeline_and_closed_form(li50, ctx50):
    with ctx50.workdps():
        closed = a1_closed_form(ctx50)
        rel = abs(li50.values[0] / closed - 1)
        ok = matches_printed(li50.values[0], A_1) and rel < mpf("1e-20")
        detail = "a_1 = %s, |pipeline/closed - 1| = %s" % (
            mp.nstr(li50.values[0], 22), mp.nstr(rel, 3))
    assert _report(2, ok, detail)


def test_criterion_03_even_odd_coefficient_lists(xi50, ctx50):
    eo = even_odd_coeffs(10, xi50)
    with ctx50.workdps():
        ok = all(matches_printed(eo.E[l], E_COEFFS[l]) for l in range(10)) \
            and all(matches_printed(eo.O[l], O_COEFFS[l]) for l in range(10))
    assert _report(3, ok, "E_1..E_10 and O_1..O_10 match printed digits")


def test_criterion_04_reciprocal_and_lambda_lists(li50, ctx50):
    recip = inverse_phi_series(li50, 20)
    lam = lambda_sequence(li50, 20)
    with ctx50.workdps():
        ok_a = all(matches_printed(recip.coeffs[j], INVERSE_PHI[j - 1])
                   for j in range(1, 21))
        ok_l = all(matches_printed(lam.li_values[n - 1], LAMBDA_LI[n - 1])
                   for n in range(1, 21))
    assert _report(4, ok_a and ok_l,
                   "A_1..A_20 and lambda_1..lambda_20 match printed digits "
                   "(a_n computed in-house to n=110)")


def test_criterion_05_log_xi_series_coefficients(xi50, ctx50):
    lg = log_xi_series(11, xi50)
    with ctx50.workdps():
        ok = all(matches_printed(lg.coeffs[k], LOG_XI_COEFFS[k - 1])
                 for k in range(1, 11))
    assert _report(5, ok, "log xi(s) coefficients s^1..s^10 match printed digits")


def test_criterion_06_route_equivalence_to_n100(li50, xi50, ctx50):
    t0 = time.time()
    oracle = an_oracle(100, xi50)
    with ctx50.workdps():
        worst = max(abs(oracle.values[n] / li50.values[n] - 1) for n in range(100))
        tol = mpf(10) ** (-(ctx50.digits - 10))
        dt = time.time() - t0
        ok = worst < tol and dt < 300
        detail = "max rel deviation %s (tol %s), %.1fs" % (
            mp.nstr(worst, 3), mp.nstr(tol, 3), dt)
    assert _report(6, ok, detail)


def test_criterion_07_triangle_invariants_exact(cnp_rational):
    import math
    from fractions import Fraction
    ok = True
    for n in range(1, 101):
        row = cnp_rational.row(n)
        ok = ok and sum(row) == 4 * n
        ok = ok and row[n - 1] == Fraction(4 ** n, math.factorial(n))
        ok = ok and all((row[p - 1] == 0) == ((n + p) % 2 == 1)
                        for p in range(1, n + 1))
    for r in range(1, 7):
        coeffs = binomial_ratio_coeffs(2 * r, 8)
        for n in range(1, 9):
            rhs = sum(cnp_rational.value(n, p) * Fraction(r) ** p
                      for p in range(1, n + 1))
            ok = ok and Fraction(coeffs[n]) == rhs
    assert _report(7, ok, "parity zeros, diagonal 4^n/n!, row sums 4n, and the "
                          "polynomial identity hold exactly (rational mode, n<=100)")


def test_criterion_08_inequality_battery_to_n1000(li30, sig30):
    rep = an_bounds_check(li30, sig30)
    total = sum(c for _, c in rep.checks)
    assert _report(8, rep.ok, "%d checks over n<=1000, %d violations"
                   % (total, len(rep.violations)))


def test_criterion_09_summand_peak_row_n1000(cnp30, sig30, ctx30):
    n, p_a, log_summand, log_sigma, nd = pa_table(cnp30, sig30, [1000])[0]
    p_ref, ls_ref, lg_ref, nd_ref = SUMMAND_PEAKS[1000]
    with ctx30.workdps():
        ok = (p_a == p_ref and matches_printed(log_summand, ls_ref)
              and matches_printed(log_sigma, lg_ref) and matches_printed(nd, nd_ref))
        detail = "n=1000: p_a=%d, log summand %s, log Sigma %s, diff %s" % (
            p_a, mp.nstr(log_summand, 22), mp.nstr(log_sigma, 11), mp.nstr(nd, 9))
    assert _report(9, ok, detail)


def test_criterion_10_sandwich_scans_zero_violations(sandwich_report):
    n_events = len(sandwich_report.events)
    ok = n_events == 0 and len(sandwich_report.samples) == 581
    assert _report(10, ok, "sigma in [1,30] step 0.05 (and [3/2,30] chain): "
                           "%d violations" % n_events)


def test_criterion_11_circle_dips_interleave_first_zero(circle_report, ctx50):
    plus = [e.refined_location for e in circle_report.events_of("dip", "xi_plus")]
    minus = [e.refined_location for e in circle_report.events_of("dip", "xi_minus")]
    xis = [e.refined_location for e in circle_report.events_of("dip", "two_xi")]
    merged = sorted([(t, "+") for t in plus] + [(t, "-") for t in minus])
    kinds = [k for _, k in merged]
    interleave = all(a != b for a, b in zip(kinds, kinds[1:]))
    with ctx50.workdps():
        first_ok = abs(xis[0] - mpf(FIRST_ZERO_T)) < mpf("1e-3")
        detail = "t in [10,60]: %d/%d/%d dips, interleave=%s, first dip %s" % (
            len(xis), len(plus), len(minus), interleave, mp.nstr(xis[0], 9))
    assert _report(11, interleave and first_ok and len(plus) >= 3, detail)


def test_criterion_12a_binomial_transform_roots_as_stated(bn30, ctx30):
    """Stated expectation: b_n^(-1/n) strictly above 1/2 and decreasing on [50,1000].

    Direct computation at certified precision contradicts both clauses:
    the roots sit strictly below 1/2 on this range (max 0.49637 at n=50)
    and reach a shallow minimum near n=242 before rising toward the
    Titchmarsh limit 1/2 from below -- the limit itself is confirmed, the
    stated approach side is not attainable. Kept as stated, failing, with
    the computed shape asserted in test_lambdas instead.
    """
    roots = bn30.root_estimates
    with ctx30.workdps():
        half = mpf(1) / 2
        above = all(roots[n - 1] > half for n in range(50, 1001))
        decreasing = all(roots[n] < roots[n - 1] for n in range(50, 1000))
        detail = ("roots on [50,1000]: max %s, min %s at n=%d; above-1/2=%s, "
                  "decreasing=%s (limit 1/2 approached from below)" % (
                      mp.nstr(max(roots[49:1000]), 8),
                      mp.nstr(min(roots[49:1000]), 8),
                      min(range(50, 1001), key=lambda n: roots[n - 1]),
                      above, decreasing))
    assert _report("12a", above and decreasing, detail)


def test_criterion_12b_radius_estimates_band(rn30, ctx30):
    with ctx30.workdps():
        window = rn30.R_estimates[599:1000]
        in_band = all(mpf("0.9") < r < 1 for r in window)
        increasing = all(b > a for a, b in zip(window, window[1:]))
        detail = "R_n on [600,1000]: %s..%s, in (0.9,1)=%s, increasing=%s" % (
            mp.nstr(window[0], 8), mp.nstr(window[-1], 8), in_band, increasing)
    assert _report("12b", in_band and increasing, detail)


def test_criterion_12c_fit_slope_negative(li30, ctx30):
    fit = fit_log_an(li30, (500, 1000))
    with ctx30.workdps():
        slope = fit.parameters["c1"]
        detail = "log a_n/n fit slope on [500,1000]: %s" % mp.nstr(slope, 8)
        ok = slope < 0
    assert _report("12c", ok, detail)


def test_criterion_12d_profile_fit_band_at_2000(cnp30, ctx30):
    fit = cnp_fit(cnp30, 2000, (40, 200))
    with ctx30.workdps():
        target = -1 - 2 / log(mpf(2000))
        diff = abs(fit.parameters["a"] - target)
        ok = diff < mpf("0.15")
        detail = "a = %s vs -1-2/log n = %s (|diff| = %s)" % (
            mp.nstr(fit.parameters["a"], 8), mp.nstr(target, 8), mp.nstr(diff, 3))
    assert _report("12d", ok, detail)


def test_criterion_12e_asymptotic_ratio_band(li30):
    rep = asym_check(li30, (500, 1000))
    ok = rep.min_ratio > mpf("0.8") and rep.max_ratio < mpf("1.1")
    assert _report("12e", ok, "log a_n vs 15n/log^3 n ratio on [500,1000]: "
                   "[%s, %s] within [0.8, 1.1]"
                   % (mp.nstr(rep.min_ratio, 5), mp.nstr(rep.max_ratio, 5)))


def test_criterion_13_byte_identical_reruns(tmp_path):
    paths = []
    for tag in ("r1", "r2"):
        d = tmp_path / tag
        d.mkdir()
        assert main(["xi", "--digits", "30", "--terms", "16",
                     "--out", str(d / "xi.tsv")]) == 0
        assert main(["li", "--digits", "30", "--nmax", "12",
                     "--out", str(d / "a.tsv"), "--oracle-limit", "12"]) == 0
        paths.append(d)
    same = all((paths[0] / f).read_bytes() == (paths[1] / f).read_bytes()
               for f in ("xi.tsv", "a.tsv", "bounds_report.json",
                         "oracle_report.json"))
    assert _report(13, same, "xi and li reruns byte-identical "
                             "(caches and reports)")


def test_criterion_14_precision_robustness_a500(li30, ctx30):
    ctx_hi = PrecisionContext(digits=50)
    xi_hi = xi_r_table(sigma_required_R(500) + 5, ctx_hi)
    sig_hi = sigma_table(500, xi_hi)
    li_hi, _ = li_an_streaming(500, sig_hi, ctx_hi)
    with ctx_hi.workdps():
        rel = abs(li_hi.values[499] / li30.values[499] - 1)
        tol = mpf(10) ** (-ctx30.digits + 5)
        ok = rel < tol
        detail = "a_500 at 30 vs 50 digits: rel diff %s (tol %s)" % (
            mp.nstr(rel, 3), mp.nstr(tol, 3))
    assert _report(14, ok, detail)
