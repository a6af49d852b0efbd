import math

import numpy as np
import pytest

from cstates import (
    CertificationError,
    LabelRangeError,
    StateLabel,
    coefficients,
    compute_weights,
    energy_mean,
    from_levels,
    make_builtin,
    moments_from_state,
    near_jstar_coefficient,
    near_jstar_exponent,
    power_gap_spectrum,
    small_j_slope,
    variance,
    variance_curve,
)


def tau2_variance_closed_form(J):
    # for e_n = 1 - 1/(n+1): rho_n = 1/(n+1), N = (1-J)^(-2),
    # and the variance reduces to (1-J)^2 (-ln(1-J) - J)/J
    return (1.0 - J) ** 2 * (-math.log1p(-J) - J) / J


def test_action_identity_examples(hydrogen, w_hydrogen, harmonic, w_harmonic):
    assert energy_mean(hydrogen, w_hydrogen, 0.3) == pytest.approx(0.3, abs=1e-10)
    assert energy_mean(harmonic, w_harmonic, 0.3) == pytest.approx(0.3, abs=1e-10)
    assert energy_mean(hydrogen, w_hydrogen, 0.0) == 0.0
    s2 = make_builtin("harmonic", 2.0)
    w2 = compute_weights(s2, 400)
    assert energy_mean(s2, w2, 1.5) == pytest.approx(3.0, abs=1e-10)


def test_action_identity_grids(hydrogen, w_hydrogen, harmonic, w_harmonic):
    for s, w, top in ((hydrogen, w_hydrogen, 0.95), (harmonic, w_harmonic, 9.5)):
        for J in np.linspace(0.0, top, 20):
            assert abs(energy_mean(s, w, float(J)) / s.omega - J) <= 1e-8


def test_harmonic_variance_is_poisson(harmonic, w_harmonic):
    for J in (0.5, 1.0, 2.0):
        vp = variance(harmonic, w_harmonic, J)
        assert vp.variance == pytest.approx(J, rel=1e-11)
        assert vp.double_sum == pytest.approx(J, rel=1e-11)
    s2 = make_builtin("harmonic", 2.0)
    w2 = compute_weights(s2, 400)
    assert variance(s2, w2, 1.5).variance == pytest.approx(4.0 * 1.5, rel=1e-11)


def test_variance_at_zero(hydrogen, w_hydrogen):
    vp = variance(hydrogen, w_hydrogen, 0.0)
    assert vp.variance == 0.0
    assert vp.mean == 0.0


def test_hydrogen_variance_bound_and_frozen_value(hydrogen, w_hydrogen):
    vp = variance(hydrogen, w_hydrogen, 0.5)
    assert vp.variance == pytest.approx(0.176630407146, rel=1e-10)
    assert vp.variance <= 0.75 * 0.5 * 0.5
    assert vp.variance == pytest.approx(vp.second_moment - vp.mean**2, abs=vp.tail_bound + 1e-15)
    for J in np.arange(0.1, 0.91, 0.1):
        vp = variance(hydrogen, w_hydrogen, float(J))
        assert vp.variance <= 0.75 * J * (1.0 - J) + 1e-9


def test_variance_two_routes_agree(hydrogen, w_hydrogen, harmonic, w_harmonic):
    worst = 0.0
    for J in np.arange(0.1, 0.91, 0.1):
        vp = variance(hydrogen, w_hydrogen, float(J))
        worst = max(worst, abs(vp.variance - vp.double_sum) / vp.variance)
    for J in (0.5, 1.0, 2.0, 4.0):
        vp = variance(harmonic, w_harmonic, J)
        worst = max(worst, abs(vp.variance - vp.double_sum) / vp.variance)
    assert worst <= 1e-8


def test_variance_nonnegative_up_to_tail(hydrogen, w_hydrogen):
    for J in np.linspace(0.0, 0.95, 15):
        vp = variance(hydrogen, w_hydrogen, float(J))
        assert vp.variance >= -vp.tail_bound


def test_variance_cross_check_skipped_for_long_truncations(hydrogen, w_hydrogen):
    vp = variance(hydrogen, w_hydrogen, 0.999)
    assert vp.double_sum is None  # ~28000 terms, beyond the pairwise limit
    vp2 = variance(hydrogen, w_hydrogen, 0.999, cross_check_limit=40_000)
    assert vp2.double_sum is not None
    assert vp2.double_sum == pytest.approx(vp.variance, rel=1e-8)


def test_variance_curve_flags_failures(hydrogen, w_hydrogen):
    pts = variance_curve(hydrogen, w_hydrogen, [0.1, 0.5, 0.9999999, 0.2])
    assert [p.J for p in pts] == [0.1, 0.5, 0.9999999, 0.2]
    assert pts[0].error is None and pts[3].error is None
    assert pts[2].error is not None and math.isnan(pts[2].variance)


def test_variance_curve_empty_and_single(hydrogen, w_hydrogen):
    assert variance_curve(hydrogen, w_hydrogen, []) == []
    pts = variance_curve(hydrogen, w_hydrogen, [0.0])
    assert len(pts) == 1 and pts[0].variance == 0.0


def test_gamma_independence_of_moments(hydrogen, w_hydrogen):
    a = coefficients(hydrogen, w_hydrogen, StateLabel(0.6, 0.0))
    b = coefficients(hydrogen, w_hydrogen, StateLabel(0.6, 7.3))
    ma, sa, va = moments_from_state(hydrogen, a)
    mb, sb, vb = moments_from_state(hydrogen, b)
    assert ma == pytest.approx(mb, abs=1e-12)
    assert va == pytest.approx(vb, abs=1e-12)
    vp = variance(hydrogen, w_hydrogen, 0.6)
    assert ma == pytest.approx(vp.mean, abs=1e-9)
    assert va == pytest.approx(vp.variance, abs=1e-9)


def test_small_j_slope_builtins(hydrogen, w_hydrogen, harmonic, w_harmonic):
    assert abs(small_j_slope(harmonic, w_harmonic) / 1.0 - 1.0) <= 1e-4
    assert abs(small_j_slope(hydrogen, w_hydrogen) / 0.75 - 1.0) <= 1e-4


def test_small_j_slope_explicit_spectrum():
    s = from_levels("steps", 1.0, [0.0, 2.0, 5.0, 9.0], e_star=12.0)
    w = compute_weights(s, 3)
    assert abs(small_j_slope(s, w) / 2.0 - 1.0) <= 1e-4


def test_second_moment_needs_growth_cap():
    s = from_levels("uncapped", 1.0, [0.0, 2.0, 5.0, 9.0])  # no e_star declared
    w = compute_weights(s, 3)
    with pytest.raises(CertificationError):
        variance(s, w, 0.1)


def test_near_jstar_exponent_hydrogen(hydrogen, w_hydrogen):
    got = near_jstar_exponent(hydrogen, w_hydrogen, [0.9, 0.99, 0.999])
    assert abs(got - 1.0) <= 0.05  # oracle fit gives 1.0018


def test_near_jstar_exponent_tau2_matches_closed_form():
    # exact check of the whole variance pipeline against a solvable spectrum
    s = power_gap_spectrum(1.0)
    w = compute_weights(s, 60_000)
    window = [0.9, 0.99, 0.999]
    for J in window:
        vp = variance(s, w, J, cross_check=False)
        assert vp.variance == pytest.approx(tau2_variance_closed_form(J), rel=1e-8)
    got = near_jstar_exponent(s, w, window, n_cap=60_000)
    x = np.log1p(-np.asarray(window))
    y = np.log([tau2_variance_closed_form(J) for J in window])
    ref_slope = float(np.polyfit(x, y, 1)[0])
    assert got == pytest.approx(ref_slope, abs=1e-6)
    # the measured decay rate: exponent 2 with a log correction, fitted ~1.71
    assert 1.6 <= got <= 1.8


def test_near_jstar_exponent_tau_half_measured():
    # gap (n+1)^(-1/4): the J^n/rho_n weights develop a sharp interior peak
    # and the fitted decay approaches 1 + 2/tau = 5, far from tau itself
    s = power_gap_spectrum(0.25)
    w = compute_weights(s, 20_000)
    got = near_jstar_exponent(s, w, [0.90, 0.92, 0.94, 0.96], n_cap=1_200_000)
    assert 4.5 <= got <= 5.2


def test_near_jstar_exponent_requires_unit_radius(harmonic, w_harmonic):
    with pytest.raises(LabelRangeError):
        near_jstar_exponent(harmonic, w_harmonic)


def test_near_jstar_exponent_too_few_points(hydrogen):
    from cstates import TruncationError

    w_small = compute_weights(hydrogen, 2_000)
    with pytest.raises(TruncationError):
        near_jstar_exponent(hydrogen, w_small, [0.99, 0.999], n_cap=2_000)


def test_near_jstar_coefficient_matches_intercept(hydrogen, w_hydrogen):
    coeff = near_jstar_coefficient(hydrogen, w_hydrogen)
    assert coeff.converged
    assert 0.55 <= coeff.value <= 0.56
    vp = variance(hydrogen, w_hydrogen, 0.999, cross_check=False)
    intercept = vp.variance / (1.0 - 0.999)
    assert abs(intercept / coeff.value - 1.0) <= 0.2


def test_near_jstar_coefficient_abel_identity(hydrogen, w_hydrogen):
    # sum (gap_m - gap_{m+1})/rho_m telescopes to sum gap_m^2/rho_m
    top = 30_000
    gaps = hydrogen.gap_array(top + 1)
    rho = np.exp(w_hydrogen.log_rho[: top + 1])
    lhs = float(((gaps[:-1] - gaps[1:]) / rho).sum())
    rhs = float((gaps[:-1] ** 2 / rho).sum())
    assert lhs == pytest.approx(rhs, rel=5e-9)


def test_near_jstar_coefficient_flags_nonsummable():
    s = power_gap_spectrum(0.25)
    w = compute_weights(s, 20_000)
    coeff = near_jstar_coefficient(s, w)
    assert not coeff.converged
