"""
Differential and total cross sections.

The dimensionless differential cross section is

    eta(phi) = 2 pi p |f(phi)|^2 = |F_AB(phi) + dSigma(phi)|^2,
    F_AB = -sin(pi beta) e^{i phi/2} / sin(phi/2),

which depends on p only through p/p0 (and p/M for intermediate modes with
lambda != 0).  The total cross section exists only for beta = 0, where

    0.5 p sigma = Sigma_1(gamma) + Sigma_2(gamma, p),
    Sigma_1 = sum_{nu^2 > 0} (1 - cos(pi m) cos(pi mu)),
    Sigma_2 = sum_{nu^2 < 0} (1 - Re S_m).

Sigma_1 has infinitely many terms decaying like pi^2 gamma^4 / (8 m^2); it is
summed directly up to a cutoff and the rest is taken from the
Euler-Maclaurin formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate

from .amplitude import DEFAULT_TOL, AmplitudeCalculator
from .errors import DivergenceError, NonConvergenceError
from .modes import (
    ExtensionParams,
    PhysicalParams,
    classify_mode,
    nonregular_modes,
    supercritical_range,
)
from .smatrix import s_value


@dataclass(frozen=True)
class CrossSectionSample:
    """One sweep point.  For eta the components are the AB part |F_AB|^2,
    the correction |dSigma|^2 and the interference 2 Re(F_AB* dSigma)."""

    x: float
    value: float
    components: dict = field(default_factory=dict)
    tail_estimate: float = 0.0


def with_shared_p0(ext: ExtensionParams | None, p0: float) -> ExtensionParams:
    """Extension with the same reference momentum p0 for every supercritical mode.

    Explicit per-mode theta/p0 entries are dropped; lambda entries are kept
    (default lambda = 0 if none is configured).
    """
    if ext is None:
        return ExtensionParams(default_lambda=0.0, default_p0=p0)
    default_lambda = 0.0 if ext.default_lambda is None else ext.default_lambda
    return replace(ext, theta={}, reference_momentum={}, default_theta=None, default_p0=p0, default_lambda=default_lambda)


def _ab_reduced(phi: float, beta: float) -> complex:
    return -math.sin(math.pi * beta) * complex(math.cos(0.5 * phi), math.sin(0.5 * phi)) / math.sin(0.5 * phi)


def eta_sample(calc: AmplitudeCalculator, phi: float) -> CrossSectionSample:
    if abs(math.sin(0.5 * phi)) < 1e-12:
        raise DivergenceError("eta diverges in the forward direction")
    ds, _, tail = calc.delta_sigma(phi)
    fab = _ab_reduced(phi, calc.params.beta)
    total = fab + ds
    comps = {
        "ab": abs(fab) ** 2,
        "correction": abs(ds) ** 2,
        "interference": 2.0 * (fab.conjugate() * ds).real,
    }
    return CrossSectionSample(phi, abs(total) ** 2, comps, tail_estimate=2.0 * abs(total) * tail + tail * tail)


def eta(
    phi: float,
    params: PhysicalParams,
    ext: ExtensionParams | None,
    p: float,
    p0: float | None = None,
    tol: float = DEFAULT_TOL,
) -> CrossSectionSample:
    """eta(phi) = 2 pi p |f(phi)|^2.

    With ``p0`` the supercritical modes use the shared-p0 convention
    theta_m = 2 mu_m ln(M/p0); otherwise ``ext`` is used as given.
    """
    if p0 is not None:
        ext = with_shared_p0(ext, p0)
    return eta_sample(AmplitudeCalculator(params, ext, p, tol), phi)


def eta_sweep(phis, params: PhysicalParams, ext: ExtensionParams | None, p: float, p0: float | None = None, tol: float = DEFAULT_TOL) -> list[CrossSectionSample]:
    if p0 is not None:
        ext = with_shared_p0(ext, p0)
    calc = AmplitudeCalculator(params, ext, p, tol)
    return [eta_sample(calc, float(phi)) for phi in phis]


# ---------------------------------------------------------------------------
# Sigma_1
# ---------------------------------------------------------------------------


def _sigma1_terms(m: np.ndarray, g2: float) -> np.ndarray:
    # 1 - cos(pi m) cos(pi mu) = 1 - cos(pi (m - mu)) = 2 sin^2(pi d / 2),  d = m - mu
    mu = np.sqrt(m * m - g2)
    d = g2 / (m + mu)
    return 2.0 * np.sin(0.5 * math.pi * d) ** 2


def _sigma1_tail(cut: float, g2: float) -> tuple[float, float]:
    """sum_{m > cut} of the term by Euler-Maclaurin; returns (value, error bound)."""

    def f(m):
        return float(_sigma1_terms(np.array([m]), g2)[0])

    # int_cut^inf f(m) dm with m = cut / t
    integral, int_err = integrate.quad(lambda t: f(cut / t) * cut / (t * t) if t > 0 else 0.0, 0.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)
    mu = math.sqrt(cut * cut - g2)
    d = g2 / (cut + mu)
    fprime = -math.pi * math.sin(math.pi * d) * d / mu
    value = integral - 0.5 * f(cut) - fprime / 12.0
    # next term is f'''/720 with f ~ c / m^2, f''' ~ -24 c / m^5
    c = math.pi**2 * g2 * g2 / 8.0
    return value, int_err + 24.0 * c / (720.0 * cut**5)


def sigma1(gamma: float, tol: float = 1e-12) -> float:
    """Sigma_1(gamma) = sum over m with nu^2 = m^2 - gamma^2 > 0 of 1 - cos(pi m) cos(pi mu).

    A mode with nu^2 = 0 exactly (integer gamma) belongs to neither sum and
    is left out.
    """
    value, _ = sigma1_with_error(gamma, tol)
    return value


def sigma1_with_error(gamma: float, tol: float = 1e-12) -> tuple[float, float]:
    g2 = float(gamma) ** 2
    if g2 == 0.0:
        return 0.0, 0.0
    first = math.floor(gamma) + 1
    cut = max(1000, int(20.0 * g2), 4 * first)
    m = np.arange(first, cut + 1, dtype=float)
    direct = float(np.sum(_sigma1_terms(m, g2)))
    tail, err = _sigma1_tail(float(cut), g2)
    if err > tol:
        raise NonConvergenceError(f"Sigma_1 tail error {err:.1e} above {tol:.1e}")
    # m and -m contribute equally at beta = 0
    return 2.0 * (direct + tail), 2.0 * err


def sigma1_asymptotes(gamma: float) -> tuple[float, float]:
    """Reference curves pi^4 gamma^4 / 24 (small gamma) and pi^2 gamma^2 / 2 (large gamma)."""
    return math.pi**4 * gamma**4 / 24.0, math.pi**2 * gamma**2 / 2.0


# ---------------------------------------------------------------------------
# Sigma_2 and totals
# ---------------------------------------------------------------------------


def _zero_flux(gamma: float, mass: float) -> PhysicalParams:
    return PhysicalParams(beta=0.0, gamma=gamma, mass=mass)


def _require_zero_flux(params: PhysicalParams):
    if params.beta != 0.0:
        raise DivergenceError(f"the total cross section diverges for beta = {params.beta} != 0")


def sigma2(gamma: float, ext: ExtensionParams, p: float, mass: float = 1.0) -> float:
    """Sigma_2 = sum over supercritical modes (beta = 0) of 1 - Re S_m."""
    params = _zero_flux(gamma, mass)
    total = 0.0
    for m in supercritical_range(params):
        total += 1.0 - s_value(classify_mode(params, m), ext, p, mass).real
    return total


def sigma2_term_closed_form(m: int, mu: float, theta: float, p: float, mass: float = 1.0) -> float:
    """1 - cos(pi m) cosh(pi mu) + sinh^2(pi mu) cos(pi m) / (cosh(pi mu) + cos(theta + 2 mu ln p/M))."""
    cm = math.cos(math.pi * m)
    ch, sh = math.cosh(math.pi * mu), math.sinh(math.pi * mu)
    return 1.0 - cm * ch + sh * sh * cm / (ch + math.cos(theta + 2.0 * mu * math.log(p / mass)))


def partial_cross_section(m: int, params: PhysicalParams, ext: ExtensionParams | None, p: float) -> float:
    """sigma_m = (2/p) (1 - Re S_m) at beta = 0."""
    _require_zero_flux(params)
    return 2.0 / p * (1.0 - s_value(classify_mode(params, m), ext, p, params.mass).real)


@dataclass(frozen=True)
class TotalCrossSection:
    p: float
    sigma: float
    sigma1: float
    sigma2: float
    intermediate_shift: float = 0.0

    @property
    def reduced(self) -> float:
        """0.5 p sigma."""
        return 0.5 * self.p * self.sigma


def sigma_total(params: PhysicalParams, ext: ExtensionParams | None, p: float, tol: float = 1e-12) -> TotalCrossSection:
    """sigma = (2/p)(Sigma_1 + Sigma_2).

    Sigma_1 assumes the hard-core value lambda = 0 for the intermediate modes;
    a nonzero lambda is added as an explicit shift.

    Raises DivergenceError for beta != 0.
    """
    _require_zero_flux(params)
    if params.gamma == 0.0:
        # free particle: every S_m = 1, including the nu = 0 s-wave J_0
        return TotalCrossSection(p=p, sigma=0.0, sigma1=0.0, sigma2=0.0)
    s1 = sigma1(params.gamma, tol)
    s2 = 0.0
    shift = 0.0
    for mode in nonregular_modes(params):
        s = s_value(mode, ext, p, params.mass)
        if mode.is_supercritical:
            s2 += 1.0 - s.real
        else:
            shift += math.cos(math.pi * mode.m) * math.cos(math.pi * mode.mu) - s.real
    sigma = 2.0 / p * (s1 + s2 + shift)
    return TotalCrossSection(p=p, sigma=sigma, sigma1=s1, sigma2=s2, intermediate_shift=shift)


def sigma_parseval(params: PhysicalParams, ext: ExtensionParams | None, p: float, tol: float = 1e-11) -> tuple[float, float]:
    """int_0^{2 pi} |f|^2 dphi by adaptive quadrature of the amplitude.

    Returns (value, quadrature error estimate).
    """
    _require_zero_flux(params)
    calc = AmplitudeCalculator(params, ext, p, tol)
    scale = 1.0 / (2.0 * math.pi * p)

    def integrand(phi):
        ds, _, _ = calc.delta_sigma(phi)
        return abs(ds) ** 2 * scale

    total = 0.0
    err = 0.0
    for a, b in ((0.0, math.pi), (math.pi, 2.0 * math.pi)):
        v, e = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-10, limit=400)
        total += v
        err += e
    return total, err
