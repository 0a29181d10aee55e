"""
Scattering amplitude via AB subtraction.

    f(phi) = f_AB(phi) + e^{-i pi/4} / sqrt(2 pi p) * dSigma(phi),
    dSigma(phi) = sum_m (S_m - S_m^AB) e^{i m phi}.

Only finitely many modes (those with nu^2 < 1 plus their neighbours) need the
extension parameters; they form the central block and are summed exactly.
Outside it every mode is regular and

    S_m - S_m^AB = e^{+-i pi beta} expm1(i pi d),  d = x - sqrt(x^2 - g^2),  x = |m - beta|,

which decays like pi g^2 / (2|m|).  Each wing sum_m g_m z^m (z = e^{+-i phi})
is split as

    g_m = a1/m + a2/m^2 + r_m,   r_m = O(m^-3),

the first two pieces are summed in closed form (-log(1-z) and Li2(z)), r_m is
summed directly up to N and its tail is estimated by repeated summation by
parts (Euler's transformation for power series on |z| = 1):

    sum_{m>=N} r_m z^m = sum_{k<K} (nabla^k r)_{N+k} z^{N+k} / (1-z)^{k+1} + rest_K.

N doubles until the bound on rest_K is below the tolerance.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy import special

from .errors import DivergenceError, NonConvergenceError
from .modes import (
    ExtensionParams,
    PhysicalParams,
    classify_mode,
    effective_gamma_squared,
    nonregular_window,
)
from .smatrix import s_ab, s_value

DEFAULT_TOL = 1e-9
MAX_TERMS = 2**23
_K_MAX = 4
_R3_SERIES = 0.5
# |sin(phi/2)| below this counts as the forward direction
FORWARD_GUARD = 1e-12


@dataclass(frozen=True)
class AmplitudeResult:
    phi: float
    f: complex
    truncation_m: int
    tail_estimate: float
    delta_sigma: complex = 0j
    f_ab: complex = 0j


def f_ab(phi, beta: float, p: float):
    """Closed-form AB amplitude -(2 pi p)^{-1/2} e^{-i pi/4} e^{i phi/2} sin(pi beta) / sin(phi/2).

    Raises DivergenceError in the forward direction (phi = 0 mod 2 pi) for
    beta != 0.
    """
    phis = np.asarray(phi, dtype=float)
    half = np.sin(0.5 * phis)
    sb = math.sin(math.pi * beta)
    if sb != 0.0 and np.any(np.abs(half) < FORWARD_GUARD):
        raise DivergenceError("f_AB diverges in the forward direction")
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(sb == 0.0, 0.0, -sb * np.exp(0.5j * phis) / half) * cmath.exp(-0.25j * math.pi) / math.sqrt(2 * math.pi * p)
    return complex(value) if value.ndim == 0 else value


def _r3(t: np.ndarray) -> np.ndarray:
    """expm1(t) - t - t^2/2 without cancellation for small |t|."""
    out = np.expm1(t) - t - 0.5 * t * t
    small = np.abs(t) < _R3_SERIES
    if np.any(small):
        out[small] = _r3_series(t[small])
    return out


def _r3_series(t: np.ndarray) -> np.ndarray:
    # sum_{n>=3} t^n / n!, Horner from the top
    acc = np.zeros(t.shape, dtype=complex)
    for n in range(22, 2, -1):
        acc = 1.0 / math.factorial(n) + t * acc
    return acc * t**3


class _Wing:
    """One wing sum_{m >= m0} g_m z^m with g_m = phase * expm1(i pi d(m)).

    ``b`` is +beta for the m > 0 wing (x = m - beta) and -beta for the
    mirrored m < 0 wing (m -> k = -m, x = k + beta).
    """

    def __init__(self, g2: float, beta: float, b: float, m0: int):
        self.g2 = g2
        self.beta = beta
        self.b = b
        self.m0 = m0
        self.phase = cmath.exp(1j * math.pi * (1.0 if b >= 0 else -1.0) * beta)
        self.a1 = self.phase * 1j * math.pi * g2 / 2.0
        self.a2 = self.phase * (1j * math.pi * g2 * b / 2.0 - math.pi**2 * g2 * g2 / 8.0)
        self._r = np.zeros(0, dtype=complex)

    def remainder(self, upto: int) -> np.ndarray:
        """r_m for m = m0 .. upto (cached, extended on demand)."""
        have = self._r.size
        need = upto - self.m0 + 1
        if need > have:
            ms = np.arange(self.m0 + have, upto + 1, dtype=float)
            self._r = np.concatenate([self._r, self._compute(ms)])
        return self._r[:need]

    def _compute(self, m: np.ndarray) -> np.ndarray:
        g2, beta, b = self.g2, self.beta, self.b
        x = m - b
        u = g2 / (x * x)
        s = np.sqrt(1.0 - u)
        q = u / (1.0 + s) ** 2
        d = 0.5 * g2 / x * (1.0 + q)
        # 1/x = 1/m + b/m^2 + beta^2/(x m^2); e1 = d/(g2/2) - 1/m
        e1 = b / m**2 + beta * beta / (x * m * m) + q / x
        first = 0.5j * math.pi * g2 * (beta * beta / (x * m * m) + q / x)
        second = -0.5 * math.pi**2 * (0.5 * g2 * e1) * (d + 0.5 * g2 / m)
        return self.phase * (first + second + _r3(1j * math.pi * d))

    def closed_part(self, z: complex) -> complex:
        ms = np.arange(1, self.m0, dtype=float)
        zm = z ** ms
        li1 = -cmath.log(1.0 - z) - np.sum(zm / ms)
        li2 = complex(special.spence(1.0 - z)) - np.sum(zm / ms**2)
        return self.a1 * li1 + self.a2 * li2

    def tail_sum(self, z: complex, tol: float, n_min: int = 0) -> tuple[complex, int, float]:
        """sum_{m>=m0} r_m z^m, returns (value, N, error bound)."""
        one_minus = abs(1.0 - z)
        n = max(64, 2 * self.m0, int(n_min))
        while True:
            r = self.remainder(n + _K_MAX)
            idx = np.arange(self.m0, n + _K_MAX + 1, dtype=float)
            count = n - self.m0
            powers = np.exp(1j * np.angle(z) * idx)
            direct = np.sum(r[:count] * powers[:count])
            window = r[count:]
            best = None
            tail = 0j
            for k in range(_K_MAX + 1):
                # nabla^k r at N + k
                diff = sum((-1) ** j * comb(k, j) * window[k - j] for j in range(k + 1))
                bound = 2.0 * (n + k) * abs(diff) / ((k + 2) * one_minus**k)
                if best is None or bound < best[1]:
                    best = (tail, bound)
                tail += diff * powers[count + k] / (1.0 - z) ** (k + 1)
            value, bound = direct + best[0], best[1]
            if bound < tol:
                return value, n, bound
            if n >= MAX_TERMS:
                raise NonConvergenceError(
                    f"wing tail bound {bound:.2e} above tolerance {tol:.1e} after {n} terms"
                )
            n *= 2


@dataclass
class AmplitudeCalculator:
    """Amplitude for fixed (params, ext, p); caches the wing remainders so
    angular sweeps reuse them."""

    params: PhysicalParams
    ext: ExtensionParams | None
    p: float
    tol: float = DEFAULT_TOL
    _central: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        window = nonregular_window(self.params)
        self.m_lo, self.m_hi = window.start, window.stop - 1
        self.g2 = effective_gamma_squared(self.params)
        self.central = []
        for m in window:
            mode = classify_mode(self.params, m)
            diff = s_value(mode, self.ext, self.p, self.params.mass) - s_ab(m, self.params.beta).s
            self.central.append((m, diff))
        beta = self.params.beta
        self.wings = []
        if self.g2 > 0.0:
            self.wings = [
                _Wing(self.g2, beta, beta, self.m_hi + 1),
                _Wing(self.g2, beta, -beta, 1 - self.m_lo),
            ]

    def delta_sigma(self, phi: float, n_min: int = 0) -> tuple[complex, int, float]:
        """dSigma(phi) with the largest cutoff used and the tail bound.

        Raises NonConvergenceError at phi = 0 mod 2 pi when the wings do not
        vanish (the forward series diverges logarithmically).
        """
        phi = float(phi)
        total = sum(diff * cmath.exp(1j * m * phi) for m, diff in self.central)
        if not self.wings:
            return complex(total), self.m_hi, 0.0
        if abs(math.sin(0.5 * phi)) < FORWARD_GUARD:
            raise NonConvergenceError("dSigma diverges in the forward direction")
        cut = 0
        bound = 0.0
        for wing, sign in zip(self.wings, (1.0, -1.0)):
            z = cmath.exp(1j * sign * phi)
            tail, n, err = wing.tail_sum(z, 0.5 * self.tol, n_min)
            total += wing.closed_part(z) + tail
            cut = max(cut, n)
            bound += err
        return complex(total), cut, bound

    def amplitude(self, phi: float, n_min: int = 0) -> AmplitudeResult:
        ds, cut, bound = self.delta_sigma(phi, n_min)
        fab = f_ab(phi, self.params.beta, self.p)
        f = fab + cmath.exp(-0.25j * math.pi) / math.sqrt(2 * math.pi * self.p) * ds
        return AmplitudeResult(phi=float(phi), f=f, truncation_m=cut, tail_estimate=bound, delta_sigma=ds, f_ab=fab)


def delta_sigma(phi, params: PhysicalParams, ext: ExtensionParams | None, p: float, tol: float = DEFAULT_TOL):
    """(dSigma, truncation_m, tail_estimate) at a single angle."""
    return AmplitudeCalculator(params, ext, p, tol).delta_sigma(phi)


def amplitude(phi, params: PhysicalParams, ext: ExtensionParams | None, p: float, tol: float = DEFAULT_TOL) -> AmplitudeResult:
    return AmplitudeCalculator(params, ext, p, tol).amplitude(phi)


def partial_amplitude(m: int, params: PhysicalParams, ext: ExtensionParams | None, p: float, cos_pi_beta: bool = True) -> complex:
    """f_m = e^{-i pi/4} / sqrt(p) * (S_m - cos(pi beta)).

    ``cos_pi_beta=False`` uses cos(beta) instead, as literally printed in
    some sources; the incoming-wave asymptotics require cos(pi beta).
    """
    s = s_value(classify_mode(params, m), ext, p, params.mass)
    c = math.cos(math.pi * params.beta) if cos_pi_beta else math.cos(params.beta)
    return cmath.exp(-0.25j * math.pi) / math.sqrt(p) * (s - c)
