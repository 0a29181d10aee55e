"""
Orthogonality oracle.

For solutions R_p = a(p) J_-nu(p rho) + b(p) J_nu(p rho) of one mode, the
overlap int_0^inf R*_{p'} R_p rho d rho is a delta function plus a remainder
coming from the rho -> 0 boundary term of the Wronskian identity

    (p'^2 - p^2) int_0^R J_s(p' rho) J_t(p rho) rho d rho
        = R [p J_s(p'R) J_t'(pR) - p' J_s'(p'R) J_t(pR)] - (same at 0).

Same order (s = t = nu): the boundary term vanishes and only
delta(p - p') / sqrt(p p') remains.  Opposite orders (s = -nu, t = nu) give

    int J_-nu(p' rho) J_nu(p rho) rho d rho = 2 sin(pi nu) / (pi (p^2 - p'^2)) (p/p')^nu

off the diagonal.  Hence, with nu = mu real,

    offdiag = 2 sin(pi mu) / (pi (p^2 - p'^2)) [(p/p')^mu a*' b - (p'/p)^mu b*' a],

which vanishes for all p, p' iff (a/b) p^{-2 mu} is a real constant, i.e.
a/b = lambda (p/M)^{2 mu}.  With nu = i mu (conj J_{i mu} = J_{-i mu} on the
real axis)

    offdiag = -2i sinh(pi mu) / (pi (p^2 - p'^2)) [(p/p')^{-i mu} a*' a - (p/p')^{i mu} b*' b],

which vanishes iff |a| = |b| and arg(a/b) - 2 mu ln p is constant, i.e.
a/b = e^{i(theta + 2 mu ln p/M)}.

The improper integrals are evaluated numerically with two independent
regulators (see ``quadrature``); their agreement is the error estimate.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special

from . import specfun
from .errors import DeltaSingularityError, DomainError
from .modes import ModeSpec, PhysicalParams, Regime, classify_mode
from .quadrature import (
    RegularizedIntegral,
    Regulator,
    damped_limit,
    radial_grid,
    window_average,
)
from .radial import hardcore_phase
from .smatrix import hardcore_theta_limit
from .specfun import arg_gamma_one_plus_imu

DEFAULT_TOL = 1e-6
_EPS_LEVELS = 7
_DECADES_AT_ZERO = 40.0


def _require_distinct(p: float, pp: float):
    if not (p > 0 and pp > 0):
        raise DomainError(f"momenta must be > 0, got p={p}, p'={pp}")
    if p == pp:
        raise DeltaSingularityError("p = p' is the delta-function part, which quadrature cannot resolve")


def regularized_integral(
    integrand: Callable[[np.ndarray], np.ndarray],
    p: float,
    pp: float,
    small_power: float = 1.0,
) -> RegularizedIntegral:
    """Regularized int_0^inf integrand(rho) d rho for an integrand beating at
    |p - p'| and p + p' with constant amplitude at large rho.

    ``small_power`` s describes integrand ~ rho^s near 0 (s > -1) and sets
    how deep the geometric panels go.  The primary value is the e^{-eps rho}
    extrapolation; the window average is attached as ``cross_check`` and the
    reported error includes their difference.
    """
    _require_distinct(p, pp)
    if not small_power > -1.0:
        raise DomainError(f"integrand ~ rho^{small_power} is not integrable at 0")
    delta = abs(p - pp)
    total = p + pp
    eps = 0.25 * delta * 0.5 ** np.arange(_EPS_LEVELS)
    a_win, b_win = 2.0 * math.pi / delta, 2.0 * math.pi / total
    r0 = 40.0 / eps[-1]
    rho_max = r0 + a_win + b_win
    levels = int(math.ceil(_DECADES_AT_ZERO * math.log2(10.0) / (3.0 * (small_power + 1.0)))) + 8
    nodes, weights = radial_grid(rho_max, 2.0 * math.pi / total, rho_first=1.0 / total, levels=levels)
    f = np.asarray(integrand(nodes), dtype=complex)

    damped, damp_err, _ = damped_limit(f, nodes, weights, eps)
    windowed = window_average(f, nodes, weights, r0, a_win, b_win)
    # O(1/R0^2) remainder of the window average, in units of the integrand amplitude
    amplitude = float(np.max(np.abs(f[nodes > 0.5 * r0]))) if np.any(nodes > 0.5 * r0) else 0.0
    win_err = amplitude / (delta * r0) ** 2 * r0
    cross = RegularizedIntegral(windowed, Regulator.WINDOW_AVERAGE, r0, win_err)
    err = damp_err + abs(damped - windowed)
    return RegularizedIntegral(damped, Regulator.EXP_DAMPING, float(eps[-1]), err, cross)


def integral_jj_same_order(nu: float, p: float, pp: float, tol: float = 1e-4) -> RegularizedIntegral:
    """int_0^inf J_nu(p' rho) J_nu(p rho) rho d rho for p != p' (closed form: 0).

    Raises DeltaSingularityError for p = p' and DomainError for nu <= -1.
    """
    _require_distinct(p, pp)
    if not nu > -1.0:
        raise DomainError(f"order must be > -1, got {nu}")

    def f(rho):
        return special.jv(nu, pp * rho) * special.jv(nu, p * rho) * rho

    return regularized_integral(f, p, pp, small_power=2.0 * nu + 1.0)


def closed_form_opposite_order(nu: complex, p: float, pp: float) -> complex:
    """2 sin(pi nu) / (pi (p^2 - p'^2)) (p/p')^nu."""
    return 2.0 * cmath.sin(math.pi * nu) / (math.pi * (p * p - pp * pp)) * cmath.exp(nu * math.log(p / pp))


def integral_jj_opposite_order(nu: float, p: float, pp: float, tol: float = 1e-4) -> RegularizedIntegral:
    """int_0^inf J_-nu(p' rho) J_nu(p rho) rho d rho for p != p', 0 < nu < 1.

    Compare with closed_form_opposite_order.  The range is where both
    J_-nu and J_nu are admissible near rho = 0; the identity itself is not
    claimed outside it.
    """
    _require_distinct(p, pp)
    if not 0.0 < nu < 1.0:
        raise DomainError(f"opposite-order integral is restricted to 0 < nu < 1, got {nu}")

    def f(rho):
        return special.jv(-nu, pp * rho) * special.jv(nu, p * rho) * rho

    return regularized_integral(f, p, pp, small_power=1.0)


# ---------------------------------------------------------------------------
# orthogonality conditions
# ---------------------------------------------------------------------------


def _coefficient_pair(c, p: float, pp: float) -> tuple[complex, complex]:
    """(c(p), c(p')) from a callable, a pair or a p-independent constant."""
    if callable(c):
        return complex(c(p)), complex(c(pp))
    if isinstance(c, (tuple, list)) and len(c) == 2:
        return complex(c[0]), complex(c[1])
    return complex(c), complex(c)


def nc_offdiag(mode: ModeSpec, a, b, p: float, pp: float) -> complex:
    """Non-delta part of int R*_{p'} R_p rho d rho for R = a J_-nu + b J_nu."""
    _require_distinct(p, pp)
    a_p, a_pp = _coefficient_pair(a, p, pp)
    b_p, b_pp = _coefficient_pair(b, p, pp)
    mu = mode.mu
    denom = math.pi * (p * p - pp * pp)
    if mode.regime is Regime.SUPERCRITICAL:
        ratio = cmath.exp(1j * mu * math.log(p / pp))
        return -2j * math.sinh(math.pi * mu) / denom * (a_pp.conjugate() * a_p / ratio - ratio * b_pp.conjugate() * b_p)
    r = (p / pp) ** mu
    return 2.0 * math.sin(math.pi * mu) / denom * (r * a_pp.conjugate() * b_p - b_pp.conjugate() * a_p / r)


def check_nc(mode: ModeSpec, a, b, p: float, pp: float, tol: float = DEFAULT_TOL) -> tuple[bool, complex]:
    """Orthogonality of the states a J_-nu + b J_nu at momenta p and p'.

    ``a`` and ``b`` are callables of p, pairs (value at p, value at p') or
    p-independent constants.  Regular modes carry only J_mu and are always
    orthogonal.  Returns (|offdiag| < tol, offdiag).

    Raises DeltaSingularityError for p = p'.
    """
    _require_distinct(p, pp)
    if mode.regime is Regime.REGULAR:
        return True, 0j
    off = nc_offdiag(mode, a, b, p, pp)
    return abs(off) < tol, off


def _pair_functions(mode: ModeSpec):
    mu = mode.mu
    if mode.regime is Regime.SUPERCRITICAL:
        return (lambda x: specfun.bessel_j_imag_order(-mu, x)), (lambda x: specfun.bessel_j_imag_order(mu, x))
    return (lambda x: special.jv(-mu, x)), (lambda x: special.jv(mu, x))


def nc_quadrature(mode: ModeSpec, a, b, p: float, pp: float) -> RegularizedIntegral:
    """Regularized int_0^inf R*_{p'} R_p rho d rho of the actual radial functions."""
    _require_distinct(p, pp)
    a_p, a_pp = _coefficient_pair(a, p, pp)
    b_p, b_pp = _coefficient_pair(b, p, pp)
    if mode.regime is Regime.REGULAR:
        a_p = a_pp = 0j
    j_minus, j_plus = _pair_functions(mode)
    small = 1.0 - 2.0 * mode.mu if mode.regime is Regime.INTERMEDIATE and (a_p != 0 or a_pp != 0) else 1.0

    def f(rho):
        r_p = b_p * j_plus(p * rho)
        r_pp = b_pp * j_plus(pp * rho)
        if a_p != 0:
            r_p = r_p + a_p * j_minus(p * rho)
        if a_pp != 0:
            r_pp = r_pp + a_pp * j_minus(pp * rho)
        return np.conj(r_pp) * r_p * rho

    return regularized_integral(f, p, pp, small_power=small)


def admissible_coefficients(mode: ModeSpec, p: float, extension: float, scale: complex = 1.0, mass: float = 1.0) -> tuple[complex, complex]:
    """(a, b) of an admissible state: a/b = lambda (p/M)^{2 mu} (intermediate,
    ``extension`` = lambda) or e^{i(theta + 2 mu ln p/M)} (supercritical,
    ``extension`` = theta).  ``scale`` is the (arbitrary) value of b."""
    mu = mode.mu
    if mode.regime is Regime.SUPERCRITICAL:
        return scale * cmath.exp(1j * (extension + 2.0 * mu * math.log(p / mass))), complex(scale)
    if mode.regime is Regime.INTERMEDIATE:
        return scale * extension * (p / mass) ** (2.0 * mu), complex(scale)
    return 0j, complex(scale)


# ---------------------------------------------------------------------------
# hard-core theta
# ---------------------------------------------------------------------------


def _phase_path(mode: ModeSpec, x_from: float, x_to: float) -> float:
    """Continuous change of arg(-J_{i mu}(x)/J_{-i mu}(x)) from x_from to x_to."""
    # the phase moves by about 2 mu per e-fold at small x and 2 per unit x at large x
    lo, hi = sorted((x_from, x_to))
    swing = 2.0 * mode.mu * math.log(hi / lo) + 2.0 * (hi - lo)
    n = int(math.ceil(swing / (0.125 * math.pi))) + 2
    xs = np.geomspace(x_from, x_to, n)
    phases = np.angle(hardcore_phase(mode, 1.0, xs))
    steps = np.diff(np.unwrap(phases))
    if np.any(np.abs(steps) > 0.25 * math.pi):
        return _phase_path(mode, x_from, math.sqrt(x_from * x_to)) + _phase_path(mode, math.sqrt(x_from * x_to), x_to)
    return float(np.sum(steps))


def hardcore_theta_scan(mode: ModeSpec, p: float, rho0_ladder: Sequence[float], mass: float = 1.0) -> np.ndarray:
    """Effective theta(rho0) = arg(-J_{i mu}(p rho0)/J_{-i mu}(p rho0)) - 2 mu ln(p/M),
    followed continuously along the ladder (not reduced mod 2 pi).

    The branch at the first ladder point is the one closest to the
    small-core form 2 mu ln(M rho0/2) + pi - 2 xi.  For p rho0 -> 0 the
    values approach that form, so the sequence diverges logarithmically.

    Raises DomainError for non-supercritical modes or a non-decreasing ladder.
    """
    if mode.regime is not Regime.SUPERCRITICAL:
        raise DomainError("hardcore_theta_scan needs a supercritical mode")
    rhos = np.asarray(rho0_ladder, dtype=float)
    if rhos.size == 0:
        return np.zeros(0)
    if np.any(rhos <= 0) or np.any(np.diff(rhos) >= 0):
        raise DomainError("rho0 ladder must be positive and strictly decreasing")
    shift = 2.0 * mode.mu * math.log(p / mass)
    two_pi = 2.0 * math.pi
    raw = cmath.phase(complex(hardcore_phase(mode, p, rhos[0]))) - shift
    limit = hardcore_theta_limit(mode, rhos[0], mass)
    theta0 = raw + two_pi * round((limit - raw) / two_pi)
    out = [theta0]
    for r_prev, r_next in zip(rhos[:-1], rhos[1:]):
        out.append(out[-1] + _phase_path(mode, p * r_prev, p * r_next))
    return np.asarray(out)


def xi(mode: ModeSpec) -> float:
    """xi_m = arg Gamma(1 + i mu) (continuous branch)."""
    return float(arg_gamma_one_plus_imu(mode.mu))


# ---------------------------------------------------------------------------
# verification report
# ---------------------------------------------------------------------------


def _json_number(z: complex):
    z = complex(z)
    return z.real if z.imag == 0.0 else [z.real, z.imag]


def _regulator_block(result: RegularizedIntegral) -> dict:
    out = {
        result.regulator.value: {
            "value": _json_number(result.value),
            "param": result.regulator_param,
            "error": result.extrapolation_error,
        }
    }
    if result.cross_check is not None:
        out.update(_regulator_block(result.cross_check))
        out["disagreement"] = result.disagreement
    return out


def _record(name: str, inputs: dict, closed: complex, result: RegularizedIntegral, tol: float, relative: bool) -> dict:
    abs_err = abs(result.value - closed)
    rel_err = abs_err / abs(closed) if closed != 0 else None
    measure = rel_err if relative and rel_err is not None else abs_err
    regs = _regulator_block(result)
    return {
        "check": name,
        "inputs": inputs,
        "closed_form": _json_number(closed),
        "numeric": _json_number(result.value),
        "abs_err": abs_err,
        "rel_err": rel_err,
        "regulators": regs,
        "tolerance": tol,
        "passed": bool(measure < tol and regs["disagreement"] < tol * max(1.0, abs(closed) if relative else 1.0)),
    }


def run_verification_suite(
    nus: Sequence[float] = (0.1, 0.3, 0.5, 0.7, 0.9),
    ratios: Sequence[float] = (1.5, 2.0, 2.5, 3.0, 4.0),
    p: float = 1.0,
    tol: float = 1e-4,
    nc_tol: float = DEFAULT_TOL,
    gamma: float = 0.9,
) -> dict:
    """Closed forms against regularized quadrature.

    Checks: the opposite-order integral on the nu x p'/p grid (relative
    error), the same-order integral off the diagonal (absolute error) and
    check_nc for admissible and violating pairs of an intermediate and a
    supercritical mode (closed form against quadrature of the radial
    functions).
    """
    checks = []
    for nu in nus:
        for r in ratios:
            pp = r * p
            inputs = {"nu": nu, "p": p, "pp": pp}
            checks.append(_record("int2", inputs, closed_form_opposite_order(nu, p, pp), integral_jj_opposite_order(nu, p, pp), tol, True))
    for nu, pp in ((0.3, 2.0 * p), (1.0, 3.0 * p), (-0.4, 1.7 * p)):
        inputs = {"nu": nu, "p": p, "pp": pp}
        checks.append(_record("int1", inputs, 0.0, integral_jj_same_order(nu, p, pp), tol, False))

    inter = classify_mode(PhysicalParams(beta=0.5, gamma=0.3), 0)
    sup = classify_mode(PhysicalParams(beta=0.0, gamma=gamma), 0)
    pp = 1.7 * p
    cases = [
        ("nc_intermediate_admissible", inter, admissible_coefficients(inter, p, 0.6), admissible_coefficients(inter, pp, 0.6, 0.8 - 0.3j), True),
        ("nc_intermediate_violating", inter, admissible_coefficients(inter, p, 0.6j), admissible_coefficients(inter, pp, 0.6j), False),
        ("nc_supercritical_admissible", sup, admissible_coefficients(sup, p, 1.1), admissible_coefficients(sup, pp, 1.1, 0.5 + 0.5j), True),
        ("nc_supercritical_violating", sup, (1.0, 1.0), (1.0, 1.0), False),
    ]
    for name, mode, (a_p, b_p), (a_pp, b_pp), admissible in cases:
        a, b = (a_p, a_pp), (b_p, b_pp)
        orthogonal, off = check_nc(mode, a, b, p, pp, nc_tol)
        quad = nc_quadrature(mode, a, b, p, pp)
        rec = _record(name, {"m": mode.m, "nu_squared": mode.nu_squared, "p": p, "pp": pp, "a": [_json_number(a_p), _json_number(a_pp)], "b": [_json_number(b_p), _json_number(b_pp)]}, off, quad, tol, False)
        rec["is_orthogonal"] = orthogonal
        rec["expected_orthogonal"] = admissible
        rec["passed"] = rec["passed"] and orthogonal == admissible
        checks.append(rec)

    passed = sum(c["passed"] for c in checks)
    return {"checks": checks, "summary": {"total": len(checks), "passed": passed, "failed": len(checks) - passed}}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False)
