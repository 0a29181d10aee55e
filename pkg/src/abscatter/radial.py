"""
Radial wavefunctions in every regime.

Scattering states are normalized to the incoming wave
e^{i pi m} e^{-i(p rho - pi/4)} / sqrt(2 pi p rho) of a unit plane wave:

    Regular        R = c J_mu(p rho),                 c = e^{i pi (m - mu/2)}
    Intermediate   R = c [Lambda J_-mu + J_mu],       Lambda = lambda (p/M)^{2 mu}
    Supercritical  R = c [e^{i chi} J_-i mu + J_i mu], chi = theta + 2 mu ln(p/M)

with c fixed so that the incoming part matches.  Every state is stored as a
pair of coefficients over a two-function basis so that values and analytic
rho-derivatives come from the same code path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special

from . import specfun
from .errors import AccuracyError, ConfigurationError, DomainError
from .modes import ExtensionParams, ModeSpec, Regime, reduce_angle


class StateKind(str, Enum):
    SCATTERING_REGULAR = "ScatteringRegular"
    SCATTERING_INTERMEDIATE = "ScatteringIntermediate"
    SCATTERING_SUPERCRITICAL = "ScatteringSupercritical"
    HARD_CORE = "HardCore"
    BOUND = "Bound"
    CUSTOM = "Custom"


class Basis(str, Enum):
    #: (J_-nu, J_nu), nu = mu or i mu
    J_PAIR = "J_-nu,J_nu"
    #: (J_mu, Y_mu), real mu; used by the hard core where J_-mu may degenerate
    JY = "J_mu,Y_mu"
    #: K_{i mu} alone
    K = "K_imu"


@dataclass(frozen=True)
class RadialState:
    """R(rho) = first * B1(p rho) + second * B2(p rho) on the chosen basis.

    ``rho0`` > 0 marks a hard core: R = 0 for rho <= rho0.
    """

    mode: ModeSpec
    kind: StateKind
    p: float
    first: complex
    second: complex
    basis: Basis = Basis.J_PAIR
    rho0: float = 0.0

    @property
    def coefficients(self) -> tuple[complex, complex]:
        return self.first, self.second

    def _basis_values(self, x: np.ndarray, derivative: int) -> tuple[np.ndarray, np.ndarray]:
        mu = self.mode.mu
        if self.basis is Basis.K:
            return specfun.bessel_k_imag_order(mu, x, derivative), np.zeros_like(x)
        if self.basis is Basis.JY:
            return specfun.bessel_j(mu, x, derivative), specfun.bessel_y(mu, x, derivative)
        if self.mode.regime is Regime.SUPERCRITICAL:
            return (
                specfun.bessel_j_imag_order(-mu, x, derivative),
                specfun.bessel_j_imag_order(mu, x, derivative),
            )
        return specfun.bessel_j(-mu, x, derivative), specfun.bessel_j(mu, x, derivative)

    def evaluate(self, rho, derivative: int = 0):
        """R^(n)(rho), derivatives taken analytically with respect to rho."""
        rhos = np.atleast_1d(np.asarray(rho, dtype=float))
        if np.any(rhos <= 0):
            raise DomainError("radial functions are evaluated at rho > 0")
        out = np.zeros(rhos.shape, dtype=complex)
        inside = rhos <= self.rho0
        live = ~inside
        if np.any(live):
            x = self.p * rhos[live]
            b1, b2 = self._basis_values(x, derivative)
            # a zero coefficient must not multiply a (possibly singular) basis function
            value = np.zeros(x.shape, dtype=complex)
            if self.first != 0:
                value += self.first * b1
            if self.second != 0:
                value += self.second * b2
            out[live] = value * self.p**derivative
        if self.basis is Basis.K:
            out = out.real
        return out[0] if np.ndim(rho) == 0 else out

    __call__ = evaluate


def _mass(ext: ExtensionParams | None, mass: float | None) -> float:
    if mass is not None:
        return float(mass)
    if ext is not None and ext.mass is not None:
        return ext.mass
    return 1.0


def supercritical_chi(theta: float, mu: float, p: float, mass: float) -> float:
    """chi = theta + 2 mu ln(p/M) reduced to [0, 2 pi)."""
    return reduce_angle(theta + 2.0 * mu * math.log(p / mass))


def scattering_state(mode: ModeSpec, ext: ExtensionParams | None, p: float, mass: float | None = None) -> RadialState:
    """Scattering solution of mode ``mode`` at momentum p.

    Raises
    ------
    ConfigurationError
        The mode needs an extension parameter that ``ext`` does not provide.
    """
    if not p > 0:
        raise DomainError(f"momentum must be > 0, got {p}")
    mass = _mass(ext, mass)
    m, mu = mode.m, mode.mu
    phase_m = cmath.exp(1j * math.pi * (m % 2))
    if mode.regime is Regime.REGULAR:
        c = cmath.exp(1j * math.pi * (m - 0.5 * mu))
        return RadialState(mode, StateKind.SCATTERING_REGULAR, p, 0.0, c)
    if ext is None:
        raise ConfigurationError(f"mode m={m} ({mode.regime.value}) needs extension parameters")
    if mode.regime is Regime.INTERMEDIATE:
        big = ext.lambda_for(mode) * (p / mass) ** (2.0 * mu)
        c = phase_m / (cmath.exp(0.5j * math.pi * mu) + big * cmath.exp(-0.5j * math.pi * mu))
        return RadialState(mode, StateKind.SCATTERING_INTERMEDIATE, p, c * big, c)
    chi = supercritical_chi(ext.theta_for(mode, mass), mu, p, mass)
    e_chi = cmath.exp(1j * chi)
    c = phase_m / (math.exp(-0.5 * math.pi * mu) + math.exp(0.5 * math.pi * mu) * e_chi)
    return RadialState(mode, StateKind.SCATTERING_SUPERCRITICAL, p, c * e_chi, c)


def radial_scattering(mode: ModeSpec, ext: ExtensionParams | None, p: float, rho, mass: float | None = None, derivative: int = 0):
    """R_m(rho) of the scattering state (see scattering_state)."""
    return scattering_state(mode, ext, p, mass).evaluate(rho, derivative)


def custom_state(mode: ModeSpec, p: float, a: complex, b: complex) -> RadialState:
    """R = a J_-nu(p rho) + b J_nu(p rho) with arbitrary (not necessarily admissible) a, b."""
    return RadialState(mode, StateKind.CUSTOM, p, complex(a), complex(b))


# ---------------------------------------------------------------------------
# hard core
# ---------------------------------------------------------------------------


def hardcore_phase(mode: ModeSpec, p: float, rho0: float) -> complex:
    """e^{i chi_eff} = -J_{i mu}(p rho0) / J_{-i mu}(p rho0) (unimodular)."""
    if mode.regime is not Regime.SUPERCRITICAL:
        raise DomainError("hardcore_phase is defined for supercritical modes")
    jp = specfun.bessel_j_imag_order(mode.mu, p * rho0)
    return -jp / np.conj(jp)


def hardcore_state(mode: ModeSpec, p: float, rho0: float) -> RadialState:
    """Hard-core solution vanishing at rho0, normalized like a scattering state.

    For nu^2 > 0 the combination Y_mu(x0) J_mu(x) - J_mu(x0) Y_mu(x) spans the
    same solution as J_mu(x0) J_-mu(x) - J_-mu(x0) J_mu(x) but stays regular
    when mu is an integer or J_-mu(x0) = 0.
    """
    if not rho0 > 0:
        raise DomainError(f"core radius must be > 0, got {rho0}")
    x0 = p * rho0
    m, mu = mode.m, mode.mu
    if mode.regime is Regime.SUPERCRITICAL:
        e_chi = complex(hardcore_phase(mode, p, rho0))
        c = cmath.exp(1j * math.pi * (m % 2)) / (math.exp(-0.5 * math.pi * mu) + math.exp(0.5 * math.pi * mu) * e_chi)
        return RadialState(mode, StateKind.HARD_CORE, p, c * e_chi, c, Basis.J_PAIR, rho0)
    h1 = complex(special.hankel1(mu, x0))
    if not np.isfinite(h1):
        raise AccuracyError(f"H1_{mu}({x0:g}) overflows; core radius too small for this order")
    norm = 1j * cmath.exp(1j * math.pi * (m - 0.5 * mu)) / h1
    j0 = float(special.jv(mu, x0))
    y0 = float(special.yv(mu, x0))
    return RadialState(mode, StateKind.HARD_CORE, p, norm * y0, -norm * j0, Basis.JY, rho0)


def radial_hardcore(mode: ModeSpec, p: float, rho0: float, rho, derivative: int = 0):
    """Hard-core radial function, 0 for rho <= rho0."""
    return hardcore_state(mode, p, rho0).evaluate(rho, derivative)


def hardcore_mixing_ratio(mode: ModeSpec, p: float, rho0: float) -> float:
    """J_mu(p rho0) / J_-mu(p rho0) for nu^2 > 0 (weight of J_-mu in the core solution)."""
    if mode.regime is Regime.SUPERCRITICAL:
        raise DomainError("mixing ratio is defined for nu^2 > 0")
    x0 = p * rho0
    return float(special.jv(mode.mu, x0) / special.jv(-mode.mu, x0))


# ---------------------------------------------------------------------------
# bound states
# ---------------------------------------------------------------------------


def bound_state(mode: ModeSpec, p: float) -> RadialState:
    """K_{i mu}(p rho), p = sqrt(-2 M E).

    Raises DomainError for modes with nu^2 > 0, which have no bound states.
    """
    if mode.regime is not Regime.SUPERCRITICAL:
        raise DomainError(f"mode m={mode.m} has nu^2 > 0 and no bound states")
    if not p > 0:
        raise DomainError(f"bound-state momentum must be > 0, got {p}")
    return RadialState(mode, StateKind.BOUND, p, 1.0, 0.0, Basis.K)


def radial_bound(mode: ModeSpec, p: float, rho, derivative: int = 0):
    return bound_state(mode, p).evaluate(rho, derivative)


# ---------------------------------------------------------------------------
# current, residual, boundary data
# ---------------------------------------------------------------------------


def radial_current(state: RadialState, rho, mass: float = 1.0):
    """j(rho) = (p / 2iM) [R* dR/dx - R dR*/dx], x = p rho.

    For any solution rho j(rho) is constant (flux through a circle); it is
    zero for admissible states and for real bound-state profiles.
    """
    value = np.asarray(state.evaluate(rho, 0))
    dx = np.asarray(state.evaluate(rho, 1)) / state.p
    j = (state.p / mass) * np.imag(np.conj(value) * dx)
    return float(j) if np.ndim(rho) == 0 else j


def equation_residual(state: RadialState, rho) -> np.ndarray:
    """R'' + R'/rho - (nu^2/rho^2) R +- p^2 R (minus sign for bound states)."""
    rhos = np.asarray(rho, dtype=float)
    r0 = state.evaluate(rhos, 0)
    r1 = state.evaluate(rhos, 1)
    r2 = state.evaluate(rhos, 2)
    sign = -1.0 if state.kind is StateKind.BOUND else 1.0
    return r2 + r1 / rhos - (state.mode.nu_squared / rhos**2) * r0 + sign * state.p**2 * r0


@dataclass(frozen=True)
class BoundaryData:
    """Small-rho boundary datum.

    Intermediate:  R ~ rho^mu + l rho^-mu.
    Supercritical: R ~ rho^{i mu} + e^{i vartheta} rho^{-i mu}.
    """

    m: int
    regime: Regime
    l: float | None = None
    vartheta: float | None = None
    residual: float = 0.0


def _frobenius(order: complex, p: float, rho: np.ndarray) -> np.ndarray:
    # Gamma(1 + nu) (2/p)^nu J_nu(p rho) = rho^nu (1 + O(rho^2)), exact solution
    x = p * rho
    if order.imag == 0.0:
        nu = order.real
        return math.exp(special.gammaln(1.0 + nu) + nu * math.log(2.0 / p)) * special.gammasgn(1.0 + nu) * special.jv(nu, x)
    scale = np.exp(special.loggamma(1.0 + order) + order * math.log(2.0 / p))
    return scale * specfun.bessel_j_complex_order(order, x)


def boundary_data(
    mode: ModeSpec,
    ext: ExtensionParams,
    p: float,
    fit_window: tuple[float, float],
    mass: float | None = None,
    method: str = "two-point",
    basis: str = "frobenius",
    n_points: int = 16,
) -> BoundaryData:
    """Extract l_m or vartheta_m from the scattering solution on a small-rho window.

    Parameters
    ----------
    fit_window : (rho_lo, rho_hi)
        Must satisfy p * rho_hi <= 0.5.
    method : {"two-point", "lstsq"}
        Exact 2x2 solve at the window ends, or least squares on ``n_points``
        log-spaced radii.
    basis : {"frobenius", "power"}
        ``frobenius`` fits with the exact solutions that behave as rho^{+-nu}
        (no truncation error); ``power`` fits the bare powers rho^{+-nu}, which
        carries an O((p rho)^2) error.

    Raises
    ------
    AccuracyError
        Window outside the small-rho regime or ill-conditioned fit.
    DomainError
        Regular mode (no boundary datum).
    """
    if mode.regime is Regime.REGULAR:
        raise DomainError(f"regular mode m={mode.m} has no boundary parameter")
    lo, hi = (float(v) for v in fit_window)
    if not 0 < lo < hi:
        raise DomainError(f"fit window must satisfy 0 < lo < hi, got {fit_window}")
    if p * hi > 0.5:
        raise AccuracyError(f"fit window p*rho = {p * hi:.3g} is outside the small-rho regime")
    if method == "two-point":
        rhos = np.array([lo, hi])
    elif method == "lstsq":
        rhos = np.geomspace(lo, hi, max(int(n_points), 3))
    else:
        raise DomainError(f"unknown fit method {method!r}")
    nu = complex(mode.mu) if mode.regime is Regime.INTERMEDIATE else 1j * mode.mu
    if basis == "frobenius":
        plus, minus = _frobenius(nu, p, rhos), _frobenius(-nu, p, rhos)
    elif basis == "power":
        plus, minus = rhos**nu, rhos ** (-nu)
    else:
        raise DomainError(f"unknown fit basis {basis!r}")
    design = np.column_stack([plus, minus]).astype(complex)
    values = np.asarray(radial_scattering(mode, ext, p, rhos, mass), dtype=complex)
    if np.linalg.cond(design) > 1e12:
        raise AccuracyError("boundary-data fit is ill-conditioned; widen the window")
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    residual = float(np.max(np.abs(design @ coef - values)) / np.max(np.abs(values)))
    ratio = coef[1] / coef[0]
    if mode.regime is Regime.INTERMEDIATE:
        return BoundaryData(mode.m, mode.regime, l=float(ratio.real), residual=residual)
    return BoundaryData(mode.m, mode.regime, vartheta=reduce_angle(cmath.phase(ratio)), residual=residual)


def expected_boundary_data(mode: ModeSpec, ext: ExtensionParams, mass: float | None = None) -> BoundaryData:
    """Closed-form l_m = lambda (2/M)^{2 mu} Gamma(1+mu)/Gamma(1-mu) or
    vartheta_m = theta + 2 mu ln(2/M) + 2 xi (mod 2 pi)."""
    mass = _mass(ext, mass)
    mu = mode.mu
    if mode.regime is Regime.INTERMEDIATE:
        l = ext.lambda_for(mode) * (2.0 / mass) ** (2.0 * mu) * specfun.gamma_ratio(mu)
        return BoundaryData(mode.m, mode.regime, l=l)
    if mode.regime is Regime.SUPERCRITICAL:
        xi = specfun.arg_gamma_one_plus_imu(mu)
        theta = ext.theta_for(mode, mass)
        return BoundaryData(mode.m, mode.regime, vartheta=reduce_angle(theta + 2.0 * mu * math.log(2.0 / mass) + 2.0 * xi))
    raise DomainError(f"regular mode m={mode.m} has no boundary parameter")
