"""
Bound states of supercritical modes.

Every mode with nu^2 = -mu^2 < 0 supports the tower

    R = K_{i mu}(p_n rho),   p_n = p_{m,0} e^{-pi n / mu},   E_n = -p_n^2 / 2M,

for all integers n, accumulating at E = 0.  The ladder anchor p_{m,0} is the
reference momentum of the extension, the same parameter that fixes theta_m
in the scattering sector.

Near the origin K_{i mu}(x) = -sqrt(pi / (mu sinh pi mu)) sin(mu ln(x/2) - xi)
+ O(x^2), xi = arg Gamma(1 + i mu), so the nodes sit at mu ln(p rho/2) - xi = k pi.
Two members of the tower overlap as

    int K_{i mu}(a rho) K_{i mu}(b rho) rho d rho = pi sin(mu ln(a/b)) / (sinh(pi mu) (a^2 - b^2)),

which vanishes exactly on the ladder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DomainError
from .modes import ExtensionParams, ModeSpec, PhysicalParams, Regime, classify_mode, supercritical_range
from .quadrature import panel_nodes
from .specfun import arg_gamma_one_plus_imu, bessel_k_imag_order

#: u = ln rho panels: width and how far below/above the relevant scales to go
_U_PANEL = 0.25
_U_BELOW = 25.0
_DECAY_X = 60.0


@dataclass(frozen=True)
class BoundState:
    m: int
    n: int
    p: float
    energy: float
    mu: float
    p_m0: float

    def wavefunction(self, rho, derivative: int = 0):
        """K_{i mu}(p rho) (unnormalized, real)."""
        rhos = np.asarray(rho, dtype=float)
        value = bessel_k_imag_order(self.mu, self.p * rhos, derivative) * self.p**derivative
        return float(value) if np.ndim(rho) == 0 else value

    def as_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "p": self.p, "energy": self.energy, "mu": self.mu, "p_m0": self.p_m0}


def _require_supercritical(mode: ModeSpec):
    if mode.regime is not Regime.SUPERCRITICAL:
        raise DomainError(f"mode m={mode.m} has nu^2 = {mode.nu_squared:g} >= 0 and no bound states")


def ladder_ratio(mu: float) -> float:
    """p_{n+1} / p_n = e^{-pi / mu}."""
    return math.exp(-math.pi / mu)


def spectrum(mode: ModeSpec, p_m0: float, n_min: int = 0, n_max: int = 3, mass: float = 1.0) -> list[BoundState]:
    """Bound states n_min <= n <= n_max of a supercritical mode.

    Raises DomainError for a non-supercritical mode, p_m0 <= 0 or an empty
    range.
    """
    _require_supercritical(mode)
    if not p_m0 > 0:
        raise DomainError(f"p_m0 must be > 0, got {p_m0}")
    if n_max < n_min:
        raise DomainError(f"empty level range n = {n_min}..{n_max}")
    mu = mode.mu
    out = []
    for n in range(int(n_min), int(n_max) + 1):
        p = p_m0 * math.exp(-math.pi * n / mu)
        out.append(BoundState(mode.m, n, p, -p * p / (2.0 * mass), mu, p_m0))
    return out


def spectrum_from_params(params: PhysicalParams, ext: ExtensionParams, n_min: int = 0, n_max: int = 3) -> list[BoundState]:
    """Towers of all supercritical modes, anchored at ext.p0_for(mode)."""
    out = []
    for m in supercritical_range(params):
        mode = classify_mode(params, m)
        out.extend(spectrum(mode, ext.p0_for(mode, params.mass), n_min, n_max, params.mass))
    return out


# ---------------------------------------------------------------------------
# overlaps
# ---------------------------------------------------------------------------


def overlap_closed_form(mu: float, a: float, b: float) -> float:
    """int_0^inf K_{i mu}(a rho) K_{i mu}(b rho) rho d rho."""
    if a == b:
        return norm_closed_form(mu, a)
    return math.pi * math.sin(mu * math.log(a / b)) / (math.sinh(math.pi * mu) * (a * a - b * b))


def norm_closed_form(mu: float, p: float) -> float:
    """int_0^inf K_{i mu}(p rho)^2 rho d rho = pi mu / (2 p^2 sinh(pi mu))."""
    return math.pi * mu / (2.0 * p * p * math.sinh(math.pi * mu))


def bound_overlap(mu: float, a: float, b: float) -> float:
    """int_0^inf K_{i mu}(a rho) K_{i mu}(b rho) rho d rho by quadrature in u = ln rho.

    Near 0 the integrand is a sine in u times e^{2u}; at large rho it decays
    like e^{-(a+b) rho}.  Gauss-Legendre panels of fixed width in u cover
    both ends.
    """
    lo = math.log(1.0 / max(a, b)) - _U_BELOW
    hi = math.log(_DECAY_X / (a + b)) if a != b else math.log(0.5 * _DECAY_X / a)
    n_panels = max(8, int(math.ceil((hi - lo) / _U_PANEL)))
    u, w = panel_nodes(np.linspace(lo, hi, n_panels + 1), order=16)
    rho = np.exp(u)
    values = bessel_k_imag_order(mu, a * rho) * bessel_k_imag_order(mu, b * rho) * rho * rho
    return float(np.sum(w * values))


def bound_orthogonality(mode: ModeSpec, state_a: BoundState, state_b: BoundState) -> float:
    """Overlap of two bound states normalized by the geometric mean of their norms.

    All three integrals are computed by quadrature.  Raises DomainError
    for states of different m or of another mode.
    """
    _require_supercritical(mode)
    if state_a.m != state_b.m:
        raise DomainError("states of different m are orthogonal through the angular part")
    if state_a.m != mode.m:
        raise DomainError(f"states belong to m={state_a.m}, not m={mode.m}")
    mu = mode.mu
    cross = bound_overlap(mu, state_a.p, state_b.p)
    if state_a.p == state_b.p:
        return 1.0
    na = bound_overlap(mu, state_a.p, state_a.p)
    nb = bound_overlap(mu, state_b.p, state_b.p)
    return cross / math.sqrt(na * nb)


# ---------------------------------------------------------------------------
# nodes
# ---------------------------------------------------------------------------


def node_positions_small_rho(mode: ModeSpec, p: float, rho_min: float, rho_max: float) -> np.ndarray:
    """rho_k with mu ln(p rho_k / 2) - xi = k pi (small-rho form of the nodes)."""
    _require_supercritical(mode)
    mu = mode.mu
    xi = float(arg_gamma_one_plus_imu(mu))
    k_lo = math.ceil((mu * math.log(p * rho_min / 2.0) - xi) / math.pi)
    k_hi = math.floor((mu * math.log(p * rho_max / 2.0) - xi) / math.pi)
    k = np.arange(k_lo, k_hi + 1, dtype=float)
    return 2.0 / p * np.exp((k * math.pi + xi) / mu)


def node_positions(mode: ModeSpec, state: BoundState, rho_min: float, rho_max: float) -> np.ndarray:
    """Zeros of K_{i mu}(p rho) in (rho_min, rho_max), located by bracketing and brentq.

    Raises DomainError unless 0 < rho_min < rho_max.
    """
    _require_supercritical(mode)
    if not 0 < rho_min < rho_max:
        raise DomainError(f"need 0 < rho_min < rho_max, got {rho_min}, {rho_max}")
    mu, p = state.mu, state.p
    # K has no zeros once x exceeds about mu (the turning point); only scan below
    top = min(rho_max, max(2.0 * mu + 2.0, 4.0) / p)
    if rho_min >= top:
        return np.zeros(0)
    per_period = 32
    n = max(64, int(math.ceil(per_period * mu * math.log(top / rho_min) / math.pi)) + 64)
    grid = np.geomspace(rho_min, top, n)
    values = bessel_k_imag_order(mu, p * grid)
    roots = []
    sign_change = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
    for i in sign_change:
        root = optimize.brentq(lambda r: bessel_k_imag_order(mu, p * r), grid[i], grid[i + 1], xtol=1e-15 * grid[i], rtol=1e-14)
        roots.append(root)
    roots.extend(grid[1:-1][values[1:-1] == 0.0])
    return np.sort(np.asarray(roots))


def count_nodes(mode: ModeSpec, state: BoundState, rho_min: float, rho_max: float) -> int:
    """Number of sign changes of K_{i mu}(p rho) on (rho_min, rho_max)."""
    return int(node_positions(mode, state, rho_min, rho_max).size)
