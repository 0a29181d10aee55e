"""
Quadrature on [0, rho_max] for oscillatory radial integrals and the two
regularizations of improper ones.

Integrals like int_0^inf J(p' rho) J(p rho) rho d rho do not converge: the
integrand oscillates with an amplitude that does not decay.  Two independent
regularizations give the distributional value for p != p':

ExpDamping
    I(eps) = int f(rho) e^{-eps rho} d rho on a geometric ladder eps_k,
    extrapolated polynomially to eps = 0 (Neville).  I(eps) is analytic
    near 0 with radius |p - p'|.
FiniteRWindowAverage
    Average of I(R) = int_0^R f over R = R0 + U1 + U2 with U1, U2 uniform on
    one period of each beat, 2 pi/|p - p'| and 2 pi/(p + p').  This is a
    weight w(rho) = P(R0 + U1 + U2 > rho); the oscillating parts of I(R)
    average out, leaving an O(1/R0^2) error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Regulator(str, Enum):
    EXP_DAMPING = "ExpDamping"
    WINDOW_AVERAGE = "FiniteRWindowAverage"


@dataclass(frozen=True)
class RegularizedIntegral:
    """Regularized value of an improper integral.

    ``extrapolation_error`` combines the internal error estimate of the
    primary regulator with its disagreement with ``cross_check`` (the other
    regulator), when present.
    """

    value: complex
    regulator: Regulator
    regulator_param: float
    extrapolation_error: float
    cross_check: "RegularizedIntegral | None" = None

    @property
    def disagreement(self) -> float:
        if self.cross_check is None:
            return 0.0
        return abs(self.value - self.cross_check.value)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def panel_nodes(edges: np.ndarray, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on consecutive panels [edges[i], edges[i+1]]."""
    u, w = gauss_legendre(order)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + half * (1.0 + u[None, :])).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def radial_grid(
    rho_max: float,
    period: float,
    rho_first: float | None = None,
    levels: int = 50,
    order: int = 16,
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on [0, rho_max]: geometric panels towards 0 below ``rho_first``
    (integrable power/log-periodic behaviour at the origin) and uniform
    panels of at most half an oscillation period above it."""
    if rho_first is None:
        rho_first = min(0.5 * period, rho_max)
    geo = rho_first * 2.0 ** -np.arange(levels, -1, -1, dtype=float)
    geo = np.concatenate([[0.0], geo])
    n_uniform = max(1, int(math.ceil((rho_max - rho_first) / (0.5 * period))))
    uniform = np.linspace(rho_first, rho_max, n_uniform + 1)
    edges = np.concatenate([geo, uniform[1:]])
    return panel_nodes(edges, order)


def neville_zero(xs: np.ndarray, ys: np.ndarray) -> tuple[complex, float]:
    """Polynomial extrapolation of ys(xs) to x = 0; error = last correction."""
    xs = np.asarray(xs, dtype=float)
    table = np.asarray(ys, dtype=complex).copy()
    n = len(xs)
    previous = table[0]
    estimate = table[0]
    for level in range(1, n):
        for i in range(n - level):
            table[i] = (xs[i + level] * table[i] - xs[i] * table[i + 1]) / (xs[i + level] - xs[i])
        previous, estimate = estimate, table[0]
    return complex(estimate), float(abs(estimate - previous))


def damped_limit(f: np.ndarray, nodes: np.ndarray, weights: np.ndarray, eps_ladder) -> tuple[complex, float, np.ndarray]:
    """Extrapolate sum w f e^{-eps rho} over the eps ladder to eps = 0."""
    eps = np.asarray(eps_ladder, dtype=float)
    values = np.array([np.sum(weights * f * np.exp(-e * nodes)) for e in eps])
    value, err = neville_zero(eps, values)
    return value, err, values


def window_weight(nodes: np.ndarray, r0: float, a: float, b: float) -> np.ndarray:
    """P(r0 + U1 + U2 > rho), U1 ~ U[0, a], U2 ~ U[0, b]."""
    a, b = max(a, b), min(a, b)
    t = nodes - r0
    cdf = np.where(
        t <= 0,
        0.0,
        np.where(
            t <= b,
            t * t / (2 * a * b),
            np.where(t <= a, (2 * t - b) / (2 * a), np.where(t <= a + b, 1.0 - (a + b - t) ** 2 / (2 * a * b), 1.0)),
        ),
    )
    return 1.0 - cdf


def window_average(f: np.ndarray, nodes: np.ndarray, weights: np.ndarray, r0: float, a: float, b: float) -> complex:
    return complex(np.sum(weights * f * window_weight(nodes, r0, a, b)))
