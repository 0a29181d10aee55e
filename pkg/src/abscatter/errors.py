"""Exception hierarchy shared by every abscatter module.

The CLI maps these onto exit codes: configuration problems exit with 2,
numerical-accuracy failures with 3 and physics-domain violations with 4.
"""

from __future__ import annotations


class AbscatterError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ConfigurationError(AbscatterError, ValueError):
    """Invalid or incomplete parameters / extension data / config files."""

    exit_code = 2


class AccuracyError(AbscatterError, ArithmeticError):
    """A numerical method cannot reach the requested accuracy."""

    exit_code = 3


class NonConvergenceError(AccuracyError):
    """A series or extrapolation failed to converge."""


class IntegrityError(AccuracyError):
    """A computed quantity violates an exact identity (e.g. |S| != 1)."""


class PhysicsDomainError(AbscatterError, ValueError):
    """Inputs outside the domain where the requested quantity exists."""

    exit_code = 4


class DomainError(PhysicsDomainError):
    """Argument outside the mathematical domain of a function."""


class SingularityError(PhysicsDomainError):
    """Evaluation at a genuine singularity."""


class UnsupportedOrderError(PhysicsDomainError):
    """Partial wave with effective order nu = 0, which is not modelled."""


class DivergenceError(PhysicsDomainError):
    """Quantity diverges (forward amplitude, total cross section with flux)."""


class DeltaSingularityError(PhysicsDomainError):
    """Momentum pair p == p' where only the delta-function part survives."""
