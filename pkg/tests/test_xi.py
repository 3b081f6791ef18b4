"""xi_r table, point evaluations, shifted combinations, even/odd coefficients."""

import random

import pytest
from mpmath import mp, mpc, mpf

from xikit import (PrecisionContext, PrecisionRefusal, even_odd_coeffs,
                   phi_weight, series_mul, xi_eval, xi_pm_eval, xi_pm_series,
                   xi_r_table)
from xikit.li import a1_closed_form
from xikit.series import PowerSeries
from xikit.xi import xi_half_shift_series

from reference_values import E_COEFFS, O_COEFFS, XI_0, matches_printed


def test_phi_positive_on_grid(ctx50):
    with ctx50.workdps():
        for k in range(0, 31):
            assert phi_weight(mpf(k) / 10, ctx50) > 0


def test_phi_decays_superexponentially(ctx50):
    with ctx50.workdps():
        assert phi_weight(3, ctx50) < mpf("1e-40")


def test_phi_integral_equals_xi_at_half(xi50, ctx50):
    # 2 * int_0^inf Phi(u) du is the r = 0 moment
    with ctx50.workdps():
        assert matches_printed(xi50.values[0], XI_0)


def test_xi_r_all_positive_and_decreasing(xi50):
    vals = xi50.values
    assert all(v > 0 for v in vals)
    assert all(vals[r + 1] < vals[r] for r in range(len(vals) - 1))


def test_xi_r_term_ratios_decreasing(xi50, ctx50):
    # the tail-certification logic relies on this
    with ctx50.workdps():
        ratios = [vals2 / vals1 for vals1, vals2 in zip(xi50.values, xi50.values[1:])]
        assert all(r2 < r1 for r1, r2 in zip(ratios, ratios[1:]))


def test_quadrature_doubling_converged(xi50, ctx50):
    assert xi50.quad_error < float(ctx50.tail_tol)


def test_unity_sum_rule(xi50, ctx50):
    with ctx50.workdps():
        unity = 2 * sum(xi50.values[r] / mpf(4) ** r for r in range(xi50.R + 1))
        assert abs(unity - 1) < ctx50.tail_tol


def test_weighted_first_moment_gives_first_li_coefficient(xi50, ctx50):
    with ctx50.workdps():
        s = 8 * sum(xi50.values[r] * r / mpf(4) ** r for r in range(1, xi50.R + 1))
        assert abs(s - a1_closed_form(ctx50)) < mpf("1e-45")


def test_eval_at_center(xi50, ctx50):
    with ctx50.workdps():
        assert xi_eval(mpf(1) / 2, xi50) == xi50.values[0]


def test_eval_at_zero_and_one(xi50, ctx50):
    with ctx50.workdps():
        assert abs(xi_eval(mpf(0), xi50) - mpf(1) / 2) < mpf("1e-45")
        assert abs(xi_eval(mpf(1), xi50) - mpf(1) / 2) < mpf("1e-45")


def test_functional_symmetry_random_points(xi50, ctx50):
    rng = random.Random(3)
    with ctx50.workdps():
        for _ in range(10):
            s = mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))
            assert abs(xi_eval(s, xi50) - xi_eval(1 - s, xi50)) < mpf("1e-45")


def test_eval_refuses_outside_certified_region(ctx30):
    small = xi_r_table(20, ctx30)
    with ctx30.workdps():
        with pytest.raises(PrecisionRefusal):
            xi_eval(mpc(mpf(1) / 2, 40), small)


def test_eval_vanishes_at_first_zero(xi50, ctx50):
    with ctx50.workdps():
        v = xi_eval(mpc(mpf(1) / 2, mpf("14.134725141734694")), xi50)
        assert abs(v) < mpf("1e-6")


def test_pm_odd_part_vanishes_at_half(xi50, ctx50):
    with ctx50.workdps():
        _, minus = xi_pm_eval(mpf(1) / 2, xi50)
        assert minus == 0


def test_pm_even_part_is_one_at_half(xi50, ctx50):
    with ctx50.workdps():
        plus, _ = xi_pm_eval(mpf(1) / 2, xi50)
        assert abs(plus - 1) < ctx50.tail_tol


def test_pm_vs_direct_shifted_evaluations(xi50, ctx50):
    with ctx50.workdps():
        s = mpf(10)
        plus, minus = xi_pm_eval(s, xi50)
        up = xi_eval(s + mpf(1) / 2, xi50)
        dn = xi_eval(s - mpf(1) / 2, xi50)
        assert abs(plus - (up + dn)) < mpf("1e-40") * abs(plus)
        assert abs(minus - (up - dn)) < mpf("1e-40") * abs(plus)
        # rearranged strict comparison: xi_plus > 2 xi - xi_minus at sigma = 10
        assert plus > 2 * xi_eval(s, xi50) - minus


def test_pm_series_sum_is_even_table(xi50, ctx50):
    order = 17
    plus, minus = xi_pm_series(order, xi50)
    with ctx50.workdps():
        total = [p + m for p, m in zip(plus.coeffs, minus.coeffs)]
        for k, c in enumerate(total):
            if k % 2 == 0:
                assert abs(c - 2 * xi50.values[k // 2]) < ctx50.tail_tol
            else:
                assert abs(c) < ctx50.tail_tol


def test_pm_series_odd_part_vanishes_at_half(xi50, ctx50):
    _, minus = xi_pm_series(25, xi50)
    with ctx50.workdps():
        # odd under s -> 1-s, hence a zero at the fixed point s = 1/2;
        # 25-term truncation limits the cancellation depth
        assert abs(minus(mpf(1) / 2)) < mpf("1e-9")


def test_pm_series_against_direct_binomial_expansion(xi50, ctx50):
    """Independent path: expand sum xi_r [s^(2r) +- (s-1)^(2r)] with series products."""
    order = 13
    plus, minus = xi_pm_series(order, xi50)
    with ctx50.workdps():
        acc_p = [mp.zero] * order
        acc_m = [mp.zero] * order
        s_sq = PowerSeries(mpf(0), (mpf(0), mpf(0), mpf(1)) + (mpf(0),) * (order - 3))
        sm1_sq = PowerSeries(mpf(0), (mpf(1), mpf(-2), mpf(1)) + (mpf(0),) * (order - 3))
        p1 = PowerSeries(mpf(0), (mpf(1),) + (mpf(0),) * (order - 1))
        p2 = p1
        for r in range(0, 60):
            for k in range(order):
                t1 = xi50.values[r] * p1.coeffs[k]
                t2 = xi50.values[r] * p2.coeffs[k]
                acc_p[k] += t1 + t2
                acc_m[k] += t1 - t2
            p1 = series_mul(p1, s_sq)
            p2 = series_mul(p2, sm1_sq)
        for k in range(order):
            assert abs(acc_p[k] - plus.coeffs[k]) < mpf("1e-40")
            assert abs(acc_m[k] - minus.coeffs[k]) < mpf("1e-40")


def test_pm_series_order_refusal(xi50):
    with pytest.raises(PrecisionRefusal):
        xi_pm_series(2 * xi50.R + 2, xi50)


def test_shifted_series_match_pm_assembly(xi50, ctx50):
    """Series of xi(s+1/2) plus series of xi(s-1/2) equals the xi_plus series."""
    order = 13
    up = xi_half_shift_series(order, xi50, +1)
    dn = xi_half_shift_series(order, xi50, -1)
    plus, minus = xi_pm_series(order, xi50)
    with ctx50.workdps():
        for k in range(order):
            assert abs(up.coeffs[k] + dn.coeffs[k] - plus.coeffs[k]) < ctx50.tail_tol
            assert abs(up.coeffs[k] - dn.coeffs[k] - minus.coeffs[k]) < ctx50.tail_tol


def test_even_odd_first_values(xi50):
    eo = even_odd_coeffs(10, xi50)
    assert matches_printed(eo.E[0], E_COEFFS[0])
    assert matches_printed(eo.O[0], O_COEFFS[0])
    assert matches_printed(eo.O[1], O_COEFFS[1])


def test_even_odd_all_positive(xi50):
    eo = even_odd_coeffs(12, xi50)
    assert all(e > 0 for e in eo.E) and all(o > 0 for o in eo.O)


def test_even_odd_series_consistent_with_eval(xi50, ctx50):
    eo = even_odd_coeffs(20, xi50)
    two_xi = eo.two_xi_series(41)
    rng = random.Random(11)
    with ctx50.workdps():
        for _ in range(20):
            s = mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))
            assert abs(two_xi(s) - 2 * xi_eval(s, xi50)) < mpf("1e-38")


def test_even_odd_refuses_beyond_table(ctx30):
    small = xi_r_table(10, ctx30)
    with pytest.raises(PrecisionRefusal):
        even_odd_coeffs(11, small)


def test_cheap_table_still_anchors_xi0(ctx30):
    # terms=0 edge: a single row must carry the anchor value
    t = xi_r_table(0, ctx30)
    assert matches_printed(t.values[0], XI_0)
