"""
Elastic scattering and bound states of a charged particle in an
Aharonov-Bohm flux line superimposed with an attractive 1/rho^2 potential.

The self-adjoint extension parameters (lambda_m for intermediate modes,
theta_m or p_m0 for supercritical ones) are physical inputs and must be
supplied through ExtensionParams or an explicit preset.
"""

from __future__ import annotations

from .amplitude import AmplitudeCalculator, AmplitudeResult, amplitude, delta_sigma, f_ab, partial_amplitude
from .bound_states import BoundState, bound_orthogonality, count_nodes, node_positions, spectrum, spectrum_from_params
from .cross_sections import eta, eta_sweep, sigma1, sigma2, sigma_parseval, sigma_total
from .errors import (
    AbscatterError,
    AccuracyError,
    ConfigurationError,
    DeltaSingularityError,
    DivergenceError,
    DomainError,
    IntegrityError,
    NonConvergenceError,
    PhysicsDomainError,
    SingularityError,
    UnsupportedOrderError,
)
from .modes import (
    ExtensionParams,
    ModeSpec,
    PhysicalParams,
    Regime,
    classify_mode,
    preset_extension,
    shared_p0,
    shared_theta,
    supercritical_range,
    validate_extension,
)
from .ortho import check_nc, hardcore_theta_scan, integral_jj_opposite_order, integral_jj_same_order
from .quadrature import RegularizedIntegral, Regulator
from .radial import RadialState, boundary_data, radial_current, radial_hardcore, radial_scattering, scattering_state
from .smatrix import SMatrixEntry, phase_shift, s_ab, s_elastic, s_hardcore

__version__ = "0.1.0"

__all__ = [
    "AbscatterError",
    "AccuracyError",
    "AmplitudeCalculator",
    "AmplitudeResult",
    "BoundState",
    "ConfigurationError",
    "DeltaSingularityError",
    "DivergenceError",
    "DomainError",
    "ExtensionParams",
    "IntegrityError",
    "ModeSpec",
    "NonConvergenceError",
    "PhysicalParams",
    "PhysicsDomainError",
    "RadialState",
    "Regime",
    "RegularizedIntegral",
    "Regulator",
    "SMatrixEntry",
    "SingularityError",
    "UnsupportedOrderError",
    "amplitude",
    "bound_orthogonality",
    "boundary_data",
    "check_nc",
    "classify_mode",
    "count_nodes",
    "delta_sigma",
    "eta",
    "eta_sweep",
    "f_ab",
    "hardcore_theta_scan",
    "integral_jj_opposite_order",
    "integral_jj_same_order",
    "node_positions",
    "partial_amplitude",
    "phase_shift",
    "preset_extension",
    "radial_current",
    "radial_hardcore",
    "radial_scattering",
    "s_ab",
    "s_elastic",
    "s_hardcore",
    "scattering_state",
    "shared_p0",
    "shared_theta",
    "sigma1",
    "sigma2",
    "sigma_parseval",
    "sigma_total",
    "spectrum",
    "spectrum_from_params",
    "supercritical_range",
    "validate_extension",
]
