from __future__ import annotations

import cmath
import json
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abscatter.errors import DeltaSingularityError, DomainError
from abscatter.modes import PhysicalParams, classify_mode
from abscatter.ortho import (
    admissible_coefficients,
    check_nc,
    closed_form_opposite_order,
    hardcore_theta_scan,
    integral_jj_opposite_order,
    integral_jj_same_order,
    nc_offdiag,
    nc_quadrature,
    report_json,
    run_verification_suite,
    xi,
)
from abscatter.quadrature import Regulator, neville_zero
from abscatter.smatrix import hardcore_theta_limit
from abscatter.specfun import arg_gamma_one_plus_imu

INTER = classify_mode(PhysicalParams(beta=0.0, gamma=0.9), 1)
SUPER = classify_mode(PhysicalParams(beta=0.0, gamma=0.9), 0)
REG = classify_mode(PhysicalParams(beta=0.0, gamma=0.9), 2)


def test_neville_extrapolates_polynomials_exactly():
    xs = np.array([0.4, 0.2, 0.1, 0.05])
    value, err = neville_zero(xs, 3.0 - 2.0 * xs + 0.5 * xs**3)
    assert value == pytest.approx(3.0, abs=1e-13)
    # the estimate compares with the next lower order, so it is conservative here
    assert err >= abs(value - 3.0)
    _, err2 = neville_zero(xs, 3.0 - 2.0 * xs + 0.5 * xs**2)
    assert err2 < 1e-12


# ---------------------------------------------------------------------------
# Bessel integrals
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("nu,pp", [(0.3, 2.0), (1.0, 3.0), (-0.4, 1.7), (2.5, 1.3)])
def test_same_order_vanishes_off_diagonal(nu, pp):
    res = integral_jj_same_order(nu, 1.0, pp)
    assert abs(res.value) < 1e-4
    assert res.regulator is Regulator.EXP_DAMPING
    assert res.cross_check is not None and res.disagreement < 1e-4


def test_opposite_order_closed_form_example():
    closed = closed_form_opposite_order(0.3, 1.0, 2.0)
    assert closed == pytest.approx(2 * math.sin(0.3 * math.pi) / (math.pi * (1 - 4)) * 0.5**0.3, rel=1e-15)
    res = integral_jj_opposite_order(0.3, 1.0, 2.0)
    assert abs(res.value - closed) < 1e-4 * abs(closed)
    assert res.extrapolation_error < 1e-4 * abs(closed)


def test_opposite_order_against_mpmath_at_finite_radius():
    # the truncated integral has a closed form from the Wronskian, checked with mpmath quadrature
    nu, p, pp, big_r = 0.45, 1.0, 2.2, 6.0
    with mp.workdps(25):
        direct = mp.quad(lambda r: mp.besselj(-nu, pp * r) * mp.besselj(nu, p * r) * r, [0, 1, 3, big_r])
        wr = big_r * (p * mp.besselj(-nu, pp * big_r) * mp.besselj(nu, p * big_r, derivative=1) - pp * mp.besselj(-nu, pp * big_r, derivative=1) * mp.besselj(nu, p * big_r))
        boundary = wr / (pp**2 - p**2)
    assert float(direct - boundary) == pytest.approx(closed_form_opposite_order(nu, p, pp).real, rel=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(1.2, 4.0))
def test_opposite_order_random_grid(nu, ratio):
    closed = closed_form_opposite_order(nu, 1.0, ratio).real
    res = integral_jj_opposite_order(nu, 1.0, ratio)
    assert abs(res.value - closed) < 1e-4 * abs(closed)


def test_both_orientations():
    nu, p, pp = 0.6, 1.0, 2.5
    forward = integral_jj_opposite_order(nu, p, pp).value
    swapped = integral_jj_opposite_order(nu, pp, p).value
    # swapping p and p' flips the sign of 1/(p^2 - p'^2) and inverts (p/p')^nu
    assert swapped / forward == pytest.approx(-((pp / p) ** (2 * nu)), rel=1e-5)


def test_integer_order_limit():
    vals = [integral_jj_opposite_order(nu, 1.0, 2.0).value for nu in (0.999, 0.9999)]
    assert abs(vals[-1]) < abs(vals[0]) < 1e-3
    assert abs(closed_form_opposite_order(1.0, 1.0, 2.0)) < 1e-16


def test_integral_errors():
    with pytest.raises(DeltaSingularityError):
        integral_jj_same_order(0.3, 1.0, 1.0)
    with pytest.raises(DeltaSingularityError):
        integral_jj_opposite_order(0.3, 2.0, 2.0)
    with pytest.raises(DomainError):
        integral_jj_same_order(-1.5, 1.0, 2.0)
    with pytest.raises(DomainError):
        integral_jj_opposite_order(1.3, 1.0, 2.0)
    with pytest.raises(DomainError):
        integral_jj_opposite_order(0.3, -1.0, 2.0)


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------


def test_admissible_pairs_are_orthogonal():
    for lam in (0.0, 0.6, -3.0):
        a, b = zip(admissible_coefficients(INTER, 1.0, lam), admissible_coefficients(INTER, 2.3, lam, 0.4 + 1j))
        ok, off = check_nc(INTER, a, b, 1.0, 2.3)
        assert ok and abs(off) < 1e-14
    a, b = zip(admissible_coefficients(SUPER, 0.5, 2.0), admissible_coefficients(SUPER, 1.9, 2.0, -1j))
    ok, off = check_nc(SUPER, a, b, 0.5, 1.9)
    assert ok and abs(off) < 1e-14


def test_callable_coefficients():
    ok, _ = check_nc(SUPER, lambda p: cmath.exp(1j * (0.3 + 2 * SUPER.mu * math.log(p))), 1.0, 0.7, 1.4)
    assert ok
    ok, _ = check_nc(SUPER, 2.0, 1.0, 0.7, 1.4)
    assert not ok


def test_violating_pair_scales_like_inverse_gap():
    # complex lambda: offdiag = -2i lambda sin(alpha) (p p')^mu times the prefactor
    lam = 0.5j
    p = 1.0
    values = []
    for pp in (1.5, 2.0, 3.0):
        a, b = zip(admissible_coefficients(INTER, p, lam), admissible_coefficients(INTER, pp, lam))
        ok, off = check_nc(INTER, a, b, p, pp)
        assert not ok
        values.append(off * (p * p - pp * pp) / (p * pp) ** INTER.mu)
    np.testing.assert_allclose(values, values[0], rtol=1e-13)
    expected = 2 * math.sin(math.pi * INTER.mu) / math.pi * (-2j * abs(lam))
    assert values[0] == pytest.approx(expected, rel=1e-13)


def test_regular_mode_is_trivially_orthogonal():
    assert check_nc(REG, 1.0, 1.0, 1.0, 2.0) == (True, 0j)


@settings(max_examples=150, deadline=None)
@given(
    st.booleans(),
    st.floats(0.2, 5.0),
    st.floats(0.2, 5.0),
    st.floats(-10.0, 10.0),
    st.floats(0.2, math.pi - 0.2),
    st.floats(0.5, 2.0),
    st.floats(0.0, 2 * math.pi),
)
def test_admissibility_separation(supercritical, p, pp, ext, alpha, mag, phase):
    if abs(p - pp) < 0.05:
        pp = p + 0.5
    scale_p, scale_pp = mag * cmath.exp(1j * phase), cmath.exp(-0.7j * phase) / mag
    if supercritical:
        mode = SUPER
        good = zip(admissible_coefficients(mode, p, ext, scale_p), admissible_coefficients(mode, pp, ext, scale_pp))
        # theta differing between the two momenta breaks the ladder phase
        bad = zip(admissible_coefficients(mode, p, ext, scale_p), admissible_coefficients(mode, pp, ext + alpha, scale_pp))
    else:
        mode = INTER
        lam = math.copysign(max(abs(ext), 0.1), ext)
        good = zip(admissible_coefficients(mode, p, lam, scale_p), admissible_coefficients(mode, pp, lam, scale_pp))
        bad_lam = lam * cmath.exp(1j * alpha)
        bad = zip(admissible_coefficients(mode, p, bad_lam, scale_p), admissible_coefficients(mode, pp, bad_lam, scale_pp))
    assert check_nc(mode, *good, p, pp, 1e-6)[0]
    assert not check_nc(mode, *bad, p, pp, 1e-6)[0]


@pytest.mark.parametrize("mode,admissible", [(INTER, True), (INTER, False), (SUPER, True), (SUPER, False)])
def test_nc_quadrature_matches_closed_form(mode, admissible):
    ext = 0.8 if admissible else 0.8j
    if mode is SUPER:
        first = admissible_coefficients(mode, 1.0, 0.4)
        second = admissible_coefficients(mode, 1.7, 0.4 if admissible else 1.9)
    else:
        first = admissible_coefficients(mode, 1.0, ext)
        second = admissible_coefficients(mode, 1.7, ext, 0.3 + 0.2j)
    a, b = zip(first, second)
    closed = nc_offdiag(mode, a, b, 1.0, 1.7)
    quad = nc_quadrature(mode, a, b, 1.0, 1.7)
    assert abs(quad.value - closed) < 1e-6
    assert (abs(closed) < 1e-12) == admissible


# ---------------------------------------------------------------------------
# hard-core theta scan
# ---------------------------------------------------------------------------


def test_theta_scan_steps_by_two_pi():
    step = math.exp(-math.pi / SUPER.mu)
    ladder = 1e-3 * step ** np.arange(6)
    theta = hardcore_theta_scan(SUPER, 1.0, ladder)
    dev = np.abs(np.diff(theta) + 2 * math.pi)
    # finite-core correction ~ (p rho0)^2 / 4 at the upper end of each step
    assert np.all(dev <= 0.3 * ladder[:-1] ** 2 + 1e-13)
    assert dev[-1] < 1e-12


def test_theta_scan_approaches_small_core_form():
    ladder = np.geomspace(1e-1, 1e-5, 9)
    theta = hardcore_theta_scan(SUPER, 1.0, ladder)
    limit = np.array([hardcore_theta_limit(SUPER, r) for r in ladder])
    err = np.abs(theta - limit)
    assert err[-1] < 1e-9
    # O((p rho0)^2): each factor 10^{-1/2} in rho0 cuts the error by ~10
    ratios = err[1:5] / err[:4]
    np.testing.assert_allclose(ratios, 0.1, rtol=0.3)


def test_theta_scan_errors():
    with pytest.raises(DomainError):
        hardcore_theta_scan(INTER, 1.0, [1e-2, 1e-3])
    with pytest.raises(DomainError):
        hardcore_theta_scan(SUPER, 1.0, [1e-3, 1e-2])


def test_xi_consistency():
    assert xi(SUPER) == arg_gamma_one_plus_imu(SUPER.mu)
    assert xi(SUPER) == pytest.approx(float(mp.im(mp.loggamma(1 + 1j * SUPER.mu))), abs=1e-13)


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def test_verification_report_structure():
    report = run_verification_suite(nus=(0.3, 0.7), ratios=(2.0,))
    assert report["summary"]["failed"] == 0
    assert report["summary"]["total"] == len(report["checks"]) == 2 + 3 + 4
    required = {"check", "inputs", "closed_form", "numeric", "abs_err", "rel_err", "regulators", "passed"}
    for c in report["checks"]:
        assert required <= set(c)
        assert {r for r in c["regulators"]} >= {"ExpDamping"}
    json.loads(report_json(report))
