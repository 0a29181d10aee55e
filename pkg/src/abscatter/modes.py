"""
Physical parameters, partial-wave classification and extension parameters.

Each partial wave m has an effective Bessel order nu with

    nu^2 = (m - beta)^2 - gamma_eff^2

and falls into one of three regimes:

* Regular        nu^2 >= 1       only J_mu is normalizable at rho = 0
* Intermediate   0 < nu^2 < 1    J_mu and J_-mu both normalizable, one real
                                 parameter lambda_m selects the combination
* Supercritical  nu^2 < 0        order i mu, one phase theta_m (or a reference
                                 momentum p_m0) selects the combination

The extension parameters are physical inputs and are never invented
silently: missing entries are either an error or are filled from an explicit
preset with a recorded note.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping

from .errors import ConfigurationError, UnsupportedOrderError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
#: |nu^2| below this is treated as nu = 0, which is not supported
NU_ZERO_EPS = 1e-12

PRESET_HARDCORE = "hardcore-limit"
PRESET_ZERO_PHASE = "zero-phase"
PRESET_DEFAULT = "hardcore-limit+zero-phase"

CONVENTION_SHARED_P0 = "shared-p0"
CONVENTION_SHARED_THETA = "shared-theta"


class Regime(str, Enum):
    REGULAR = "Regular"
    INTERMEDIATE = "Intermediate"
    SUPERCRITICAL = "Supercritical"


@dataclass(frozen=True)
class PhysicalParams:
    """Flux parameter beta, charge parameter gamma and mass M.

    beta is reduced to [0, 1) on construction; an integer shift of the flux
    only relabels the partial waves.  With ``neutral_atom_mode`` the magnetic
    mass term adds beta^2 (of the reduced beta) to gamma^2.
    """

    beta: float = 0.0
    gamma: float = 0.0
    mass: float = 1.0
    neutral_atom_mode: bool = False

    def __post_init__(self):
        for name in ("beta", "gamma", "mass"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigurationError(f"{name} must be a finite real number, got {value!r}")
        if self.gamma < 0:
            raise ConfigurationError(f"gamma must be >= 0, got {self.gamma}")
        if self.mass <= 0:
            raise ConfigurationError(f"mass must be > 0, got {self.mass}")
        beta = float(self.beta) % 1.0
        if beta >= 1.0:  # -1e-17 % 1.0 == 1.0
            beta = 0.0
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "neutral_atom_mode", bool(self.neutral_atom_mode))

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "gamma": self.gamma,
            "mass": self.mass,
            "neutral_atom_mode": self.neutral_atom_mode,
        }


@dataclass(frozen=True)
class ModeSpec:
    m: int
    nu_squared: float
    mu: float
    regime: Regime

    @property
    def is_regular(self) -> bool:
        return self.regime is Regime.REGULAR

    @property
    def is_intermediate(self) -> bool:
        return self.regime is Regime.INTERMEDIATE

    @property
    def is_supercritical(self) -> bool:
        return self.regime is Regime.SUPERCRITICAL


def effective_gamma_squared(params: PhysicalParams) -> float:
    """gamma^2, or gamma^2 + beta^2 for a neutral atom."""
    g2 = params.gamma * params.gamma
    if params.neutral_atom_mode:
        g2 += params.beta * params.beta
    return g2


def nu_squared(params: PhysicalParams, m: int) -> float:
    shift = m - params.beta
    return shift * shift - effective_gamma_squared(params)


def classify_mode(params: PhysicalParams, m: int, eps: float = NU_ZERO_EPS) -> ModeSpec:
    """Effective order and regime of partial wave m.

    Raises
    ------
    UnsupportedOrderError
        |nu^2| <= eps.  The nu = 0 mode needs logarithmic solutions and a
        separate extension analysis that is not implemented.
    """
    if isinstance(m, bool) or int(m) != m:
        raise ConfigurationError(f"mode index must be an integer, got {m!r}")
    m = int(m)
    nu2 = nu_squared(params, m)
    if abs(nu2) <= eps:
        raise UnsupportedOrderError(f"mode m={m} has nu^2 = {nu2:.3e} ~ 0 (nu = 0 is not supported)")
    if nu2 >= 1.0:
        regime = Regime.REGULAR
    elif nu2 > 0.0:
        regime = Regime.INTERMEDIATE
    else:
        regime = Regime.SUPERCRITICAL
    return ModeSpec(m=m, nu_squared=nu2, mu=math.sqrt(abs(nu2)), regime=regime)


def supercritical_range(params: PhysicalParams) -> range:
    """All integers strictly inside (beta - gamma_eff, beta + gamma_eff)."""
    g = math.sqrt(effective_gamma_squared(params))
    if g == 0.0:
        return range(0)
    lo = math.floor(params.beta - g) + 1
    hi = math.ceil(params.beta + g) - 1
    return range(lo, hi + 1) if hi >= lo else range(0)


def nonregular_window(params: PhysicalParams) -> range:
    """Integer window that contains every mode with nu^2 < 1."""
    reach = math.sqrt(1.0 + effective_gamma_squared(params))
    return range(math.floor(params.beta - reach), math.ceil(params.beta + reach) + 1)


def nonregular_modes(params: PhysicalParams) -> list[ModeSpec]:
    """Intermediate and supercritical modes in increasing m.

    Raises UnsupportedOrderError if one of them has nu = 0.
    """
    out = []
    for m in nonregular_window(params):
        if nu_squared(params, m) < 1.0:
            out.append(classify_mode(params, m))
    return out


def intermediate_modes(params: PhysicalParams) -> list[int]:
    return [s.m for s in nonregular_modes(params) if s.is_intermediate]


# ---------------------------------------------------------------------------
# theta <-> p0
# ---------------------------------------------------------------------------


def theta_from_p0(mu: float, p0: float, mass: float) -> float:
    """theta = 2 mu ln(M / p0) reduced to [0, 2 pi)."""
    if not p0 > 0:
        raise ConfigurationError(f"reference momentum must be > 0, got {p0!r}")
    return reduce_angle(2.0 * mu * math.log(mass / p0))


def p0_from_theta(mu: float, theta: float, mass: float) -> float:
    """Inverse of theta_from_p0 on the canonical branch M e^{-pi/mu} < p0 <= M."""
    return mass * math.exp(-reduce_angle(theta) / (2.0 * mu))


def reduce_angle(theta: float) -> float:
    value = math.fmod(theta, TWO_PI)
    if value < 0:
        value += TWO_PI
    if value >= TWO_PI:
        value = 0.0
    return value


# ---------------------------------------------------------------------------
# extension parameters
# ---------------------------------------------------------------------------


def _int_keys(values: Mapping | None, name: str) -> dict[int, float]:
    out: dict[int, float] = {}
    for key, value in (values or {}).items():
        try:
            m = int(key)
        except (TypeError, ValueError):
            raise ConfigurationError(f"{name}: mode key {key!r} is not an integer") from None
        if str(m) != str(key).strip() and m != key:
            raise ConfigurationError(f"{name}: mode key {key!r} is not an integer")
        out[m] = _real(value, f"{name}[{m}]")
    return out


def _real(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigurationError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ExtensionParams:
    """Self-adjoint extension data.

    Attributes
    ----------
    lambdas : dict
        lambda_m for intermediate modes.
    theta : dict
        theta_m for supercritical modes, any real (reduced mod 2 pi on use).
    reference_momentum : dict
        p_m0 for supercritical modes; theta_m = 2 mu ln(M / p_m0).  An
        explicit theta entry takes precedence.
    default_lambda, default_theta, default_p0 : float or None
        Fallbacks for modes without an explicit entry.  ``default_p0`` is the
        shared-p0 convention (same reference momentum for every mode, so
        theta_m differs between modes with different mu); ``default_theta``
        is the shared-theta convention.  If both are set, p0 wins.
    preset : str or None
        Name of the preset the container was built from.
    mass : float or None
        Mass the conversions were done with; set by validate_extension.
    notes : tuple of str
        Record of defaults filled in by validate_extension.
    """

    lambdas: Mapping[int, float] = field(default_factory=dict)
    theta: Mapping[int, float] = field(default_factory=dict)
    reference_momentum: Mapping[int, float] = field(default_factory=dict)
    default_lambda: float | None = None
    default_theta: float | None = None
    default_p0: float | None = None
    preset: str | None = None
    mass: float | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lambdas", _int_keys(self.lambdas, "lambda"))
        object.__setattr__(self, "theta", _int_keys(self.theta, "theta"))
        p0 = _int_keys(self.reference_momentum, "p0")
        for m, value in p0.items():
            if value <= 0:
                raise ConfigurationError(f"p0[{m}] must be > 0, got {value}")
        object.__setattr__(self, "reference_momentum", p0)
        for name in ("default_lambda", "default_theta", "default_p0"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _real(value, name))
        if self.default_p0 is not None and self.default_p0 <= 0:
            raise ConfigurationError(f"default_p0 must be > 0, got {self.default_p0}")

    @property
    def convention(self) -> str | None:
        if self.default_p0 is not None:
            return CONVENTION_SHARED_P0
        if self.default_theta is not None:
            return CONVENTION_SHARED_THETA
        return None

    def lambda_for(self, mode: ModeSpec) -> float:
        if mode.m in self.lambdas:
            return self.lambdas[mode.m]
        if self.default_lambda is not None:
            return self.default_lambda
        raise ConfigurationError(f"no lambda given for intermediate mode m={mode.m}")

    def theta_for(self, mode: ModeSpec, mass: float) -> float:
        """theta_m in [0, 2 pi) for a supercritical mode."""
        m = mode.m
        if m in self.theta:
            return reduce_angle(self.theta[m])
        if m in self.reference_momentum:
            return theta_from_p0(mode.mu, self.reference_momentum[m], mass)
        if self.default_p0 is not None:
            return theta_from_p0(mode.mu, self.default_p0, mass)
        if self.default_theta is not None:
            return reduce_angle(self.default_theta)
        raise ConfigurationError(f"no theta / p0 given for supercritical mode m={m}")

    def p0_for(self, mode: ModeSpec, mass: float) -> float:
        """Reference momentum p_m0 (explicit entry, shared p0, or from theta)."""
        m = mode.m
        if m not in self.theta:
            if m in self.reference_momentum:
                return self.reference_momentum[m]
            if self.default_p0 is not None:
                return self.default_p0
        return p0_from_theta(mode.mu, self.theta_for(mode, mass), mass)

    def as_dict(self) -> dict:
        return {
            "preset": self.preset,
            "convention": self.convention,
            "lambda": {str(k): v for k, v in sorted(self.lambdas.items())},
            "theta": {str(k): v for k, v in sorted(self.theta.items())},
            "p0": {str(k): v for k, v in sorted(self.reference_momentum.items())},
            "default_lambda": self.default_lambda,
            "default_theta": self.default_theta,
            "default_p0": self.default_p0,
            "notes": list(self.notes),
        }


def preset_extension(name: str) -> ExtensionParams:
    """Named extension presets.

    ``hardcore-limit``  lambda_m = 0 (the vanishing-core limit of the
    intermediate modes), ``zero-phase``  theta_m = 0, and
    ``hardcore-limit+zero-phase`` both.
    """
    if name == PRESET_HARDCORE:
        return ExtensionParams(default_lambda=0.0, preset=name)
    if name == PRESET_ZERO_PHASE:
        return ExtensionParams(default_theta=0.0, preset=name)
    if name == PRESET_DEFAULT:
        return ExtensionParams(default_lambda=0.0, default_theta=0.0, preset=name)
    raise ConfigurationError(f"unknown extension preset {name!r}")


def shared_p0(p0: float, lambdas: Mapping[int, float] | None = None, default_lambda: float | None = 0.0) -> ExtensionParams:
    """One reference momentum p0 for every supercritical mode."""
    return ExtensionParams(lambdas=lambdas or {}, default_lambda=default_lambda, default_p0=p0)


def shared_theta(theta: float, lambdas: Mapping[int, float] | None = None, default_lambda: float | None = 0.0) -> ExtensionParams:
    """One phase theta for every supercritical mode."""
    return ExtensionParams(lambdas=lambdas or {}, default_lambda=default_lambda, default_theta=theta)


def validate_extension(
    params: PhysicalParams, ext: ExtensionParams, mode_window: int | None = None
) -> ExtensionParams:
    """Return an explicit, checked extension container for ``params``.

    Every intermediate mode gets a lambda entry and every supercritical mode
    a theta entry (reduced to [0, 2 pi)) together with the matching p0.
    Modes with nothing supplied get lambda = 0 / theta = 0 and a note; entries
    for modes of the wrong regime are dropped with a note.

    Parameters
    ----------
    mode_window : int, optional
        Only modes with |m| <= mode_window are filled.  Default: all
        non-regular modes.
    """
    notes = list(ext.notes)
    lambdas: dict[int, float] = {}
    theta: dict[int, float] = {}
    p0: dict[int, float] = {}
    modes = [s for s in nonregular_modes(params) if mode_window is None or abs(s.m) <= mode_window]
    wanted_l = {s.m for s in modes if s.is_intermediate}
    wanted_t = {s.m for s in modes if s.is_supercritical}
    for s in modes:
        if s.is_intermediate:
            try:
                lambdas[s.m] = ext.lambda_for(s)
            except ConfigurationError:
                lambdas[s.m] = 0.0
                notes.append(f"lambda[{s.m}] missing, set to 0")
        else:
            try:
                theta[s.m] = ext.theta_for(s, params.mass)
            except ConfigurationError:
                theta[s.m] = 0.0
                notes.append(f"theta[{s.m}] missing, set to 0")
            p0[s.m] = p0_from_theta(s.mu, theta[s.m], params.mass)
    for m in sorted(set(ext.lambdas) - wanted_l):
        if mode_window is None or abs(m) <= mode_window:
            notes.append(f"lambda[{m}] ignored: mode {m} is not intermediate")
    for m in sorted((set(ext.theta) | set(ext.reference_momentum)) - wanted_t):
        if mode_window is None or abs(m) <= mode_window:
            notes.append(f"theta/p0[{m}] ignored: mode {m} is not supercritical")
    for note in notes[len(ext.notes):]:
        logger.warning("extension: %s", note)
    return replace(
        ext,
        lambdas=lambdas,
        theta=theta,
        reference_momentum=p0,
        mass=params.mass,
        notes=tuple(notes),
    )


def modes_in_window(params: PhysicalParams, window: int) -> Iterable[int]:
    return range(-int(window), int(window) + 1)
