"""
Partial-wave S-matrix elements.

With the asymptotic form

    R_m -> (2 pi p rho)^{-1/2} [e^{i pi m} e^{-i(p rho - pi/4)} + S_m e^{i(p rho - pi/4)}]

the three regimes give

    Regular        S = e^{i pi (m - mu)}
    Intermediate   S = e^{i pi (m - mu)} (1 + Lambda e^{i pi mu}) / (1 + Lambda e^{-i pi mu}),
                   Lambda = lambda (p/M)^{2 mu}
    Supercritical  S = e^{i pi m} e^{-i chi} (e^{pi mu} + e^{i chi}) / (e^{pi mu} + e^{-i chi}),
                   chi = theta + 2 mu ln(p/M)

and the pure flux line S^AB = e^{i pi (m - |m - beta|)}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConfigurationError, DomainError, IntegrityError
from .modes import ExtensionParams, ModeSpec, PhysicalParams, Regime, classify_mode
from .radial import _mass, hardcore_phase, supercritical_chi
from .specfun import arg_gamma_one_plus_imu

UNIMODULAR_TOL = 1e-8


@dataclass(frozen=True)
class SMatrixEntry:
    m: int
    s: complex
    delta: float

    @classmethod
    def from_s(cls, m: int, s: complex) -> "SMatrixEntry":
        return cls(m=m, s=complex(s), delta=principal_phase_shift(s))


def _parity_phase(m: int, shift: float) -> complex:
    # e^{i pi (m - shift)} with the integer part taken mod 2 to keep the argument small
    return cmath.exp(1j * math.pi * ((m % 2) - shift))


def principal_phase_shift(s: complex) -> float:
    """delta = arg(s)/2 in (-pi/2, pi/2]."""
    delta = 0.5 * cmath.phase(s)
    if delta <= -0.5 * math.pi:
        delta += math.pi
    return delta


def phase_shift(entry: SMatrixEntry | complex) -> float:
    """Phase shift on the principal branch (-pi/2, pi/2].

    Raises IntegrityError if |s| differs from 1 by more than 1e-8.
    """
    s = entry.s if isinstance(entry, SMatrixEntry) else complex(entry)
    if abs(abs(s) - 1.0) > UNIMODULAR_TOL:
        raise IntegrityError(f"|S| = {abs(s):.12g} is not unimodular")
    return principal_phase_shift(s)


def phase_shift_sweep(values) -> np.ndarray:
    """Phase shifts made continuous along a sweep (unwrapped 2 delta / 2)."""
    s = np.asarray([v.s if isinstance(v, SMatrixEntry) else v for v in values], dtype=complex)
    if np.any(np.abs(np.abs(s) - 1.0) > UNIMODULAR_TOL):
        raise IntegrityError("non-unimodular S in sweep")
    two_delta = np.unwrap(np.angle(s))
    return 0.5 * two_delta


def s_ab(m: int, beta: float) -> SMatrixEntry:
    """Aharonov-Bohm S_m = e^{i pi (m - |m - beta|)}."""
    if not 0.0 <= beta < 1.0:
        raise DomainError(f"beta must lie in [0, 1), got {beta}")
    return SMatrixEntry.from_s(m, _parity_phase(m, abs(m - beta)))


def _supercritical_s(m: int, mu: float, chi: float) -> complex:
    # (e^{pi mu} + e) / (e e^{pi mu} + 1), divided through by e^{pi mu}
    e = cmath.exp(1j * chi)
    small = math.exp(-math.pi * mu)
    return _parity_phase(m, 0.0) * (1.0 + e * small) / (e + small)


def s_value(mode: ModeSpec, ext: ExtensionParams | None, p: float, mass: float | None = None) -> complex:
    """S_m as a complex number (see s_elastic)."""
    if not p > 0:
        raise DomainError(f"momentum must be > 0, got {p}")
    m, mu = mode.m, mode.mu
    if mode.regime is Regime.REGULAR:
        return _parity_phase(m, mu)
    if ext is None:
        raise ConfigurationError(f"mode m={m} ({mode.regime.value}) needs extension parameters")
    mass = _mass(ext, mass)
    if mode.regime is Regime.INTERMEDIATE:
        lam = ext.lambda_for(mode)
        if lam == 0.0:
            return _parity_phase(m, mu)
        big = lam * (p / mass) ** (2.0 * mu)
        if not math.isfinite(big):
            return _parity_phase(m, -mu)
        num = 1.0 + big * cmath.exp(1j * math.pi * mu)
        return _parity_phase(m, mu) * num / num.conjugate()
    chi = supercritical_chi(ext.theta_for(mode, mass), mu, p, mass)
    return _supercritical_s(m, mu, chi)


def s_elastic(mode: ModeSpec, ext: ExtensionParams | None, p: float, mass: float | None = None) -> SMatrixEntry:
    """S-matrix element of the singular problem with the given extension.

    Raises
    ------
    ConfigurationError
        Missing lambda / theta for a non-regular mode.
    """
    return SMatrixEntry.from_s(mode.m, s_value(mode, ext, p, mass))


def s_hardcore(mode: ModeSpec, p: float, rho0: float) -> SMatrixEntry:
    """S-matrix element with an impenetrable core of radius rho0.

    nu^2 > 0:  S = -e^{i pi (m - mu)} H2_mu(p rho0) / H1_mu(p rho0)
    nu^2 < 0:  supercritical form with e^{i chi} = -J_{i mu}(p rho0) / J_{-i mu}(p rho0)
    """
    if not rho0 > 0:
        raise DomainError(f"core radius must be > 0, got {rho0}")
    if mode.regime is Regime.SUPERCRITICAL:
        chi = cmath.phase(complex(hardcore_phase(mode, p, rho0)))
        return SMatrixEntry.from_s(mode.m, _supercritical_s(mode.m, mode.mu, chi))
    x0 = p * rho0
    h1 = complex(special.hankel1(mode.mu, x0))
    if not np.isfinite(h1) or h1 == 0:
        # H1 overflows only for tiny cores, where the ratio is 1 to all digits
        return SMatrixEntry.from_s(mode.m, _parity_phase(mode.m, mode.mu))
    ratio = h1.conjugate() / h1
    return SMatrixEntry.from_s(mode.m, -_parity_phase(mode.m, mode.mu) * ratio)


def hardcore_theta(mode: ModeSpec, p: float, rho0: float, mass: float = 1.0) -> float:
    """Effective theta_m of the hard core: arg(-J_{i mu}/J_{-i mu}) - 2 mu ln(p/M), in [0, 2 pi)."""
    chi = cmath.phase(complex(hardcore_phase(mode, p, rho0)))
    return (chi - 2.0 * mode.mu * math.log(p / mass)) % (2.0 * math.pi)


def hardcore_theta_limit(mode: ModeSpec, rho0: float, mass: float = 1.0) -> float:
    """Small-core form theta(rho0) = 2 mu ln(M rho0 / 2) + pi - 2 xi (not reduced)."""
    return 2.0 * mode.mu * math.log(mass * rho0 / 2.0) + math.pi - 2.0 * arg_gamma_one_plus_imu(mode.mu)


def s_matrix_table(params: PhysicalParams, ext: ExtensionParams | None, p: float, m_values) -> list[SMatrixEntry]:
    """s_elastic for each m (nu = 0 modes raise UnsupportedOrderError)."""
    return [s_elastic(classify_mode(params, m), ext, p, params.mass) for m in m_values]
