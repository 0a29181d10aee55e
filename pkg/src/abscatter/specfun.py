"""
Special functions for the radial problem
========================================

Real-order Bessel functions J_nu(x) are delegated to ``scipy.special``.
The imaginary-order family needed for supercritical partial waves is
evaluated here, since scipy only supports real orders:

J_nu(x), complex nu
    Power series  sum_k (-1)^k (x/2)^(2k+nu) / (k! Gamma(k+1+nu))  below a
    crossover x_c = max(12, 2|nu|), Hankel asymptotic expansion (optimally
    truncated) above it.  An error model is attached to both; if the
    primary choice misses the accuracy target the other one is tried.
I_nu(x), complex nu
    Power series.  For real x > 0 there is no catastrophic cancellation.
K_{i mu}(x)
    small x: pi (I_{-i mu}(x) - I_{i mu}(x)) / (2 i sinh(pi mu))
    x > 1:   int_0^inf exp(-x cosh t) cos(mu t) dt, Gauss-Legendre with
             node doubling until converged.  The I-difference loses about
             e^{2x} / sinh(pi mu) relative digits, so beyond x = 1 it is only
             kept while that loss stays below the integral's.

All functions accept scalars or arrays of x and are pure.  Derivatives are
formed from the standard recurrences, never by finite differences.
"""

from __future__ import annotations

import functools
import logging
import os
import warnings
from math import comb

import numpy as np
from scipy import special

from .errors import AccuracyError, DomainError, SingularityError

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps

#: minimum series/asymptotic crossover; the actual crossover is max(this, 2|nu|)
SERIES_CROSSOVER = 12.0
#: relative accuracy the evaluators try to reach inside the validated box
ACCURACY_TARGET = 1e-10
#: relative error estimate above which an AccuracyError is raised
ACCURACY_LIMIT = 1e-7
#: library-declared order range
MAX_ORDER = 1e4
#: validated box for the accuracy target (order, argument)
VALIDATED_ORDER = 20.0
VALIDATED_X = 50.0

_MAX_ASYMPTOTIC_TERMS = 96
_MAX_SERIES_TERMS = 2000
# e^-42 ~ 6e-19: integrand cut for the K integral representation
_K_CUT = 42.0
_K_SERIES_X = 1.0
_K_SERIES_MIN_MU = 0.05


def _debug_k() -> bool:
    return os.environ.get("ABSCATTER_DEBUG_K", "") not in ("", "0")


def _as_float_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _restore(values: np.ndarray, scalar: bool):
    return values[0] if scalar else values


# ---------------------------------------------------------------------------
# power series
# ---------------------------------------------------------------------------


def _power_series(nu: complex, x: np.ndarray, sign: float) -> tuple[np.ndarray, np.ndarray]:
    """sum_k sign^k (x/2)^(2k+nu) / (k! Gamma(k+1+nu)) for x > 0.

    Returns the value and an absolute rounding-error estimate
    ``EPS * sum_k |t_k|`` (the series is always summed to full precision).
    """
    half = 0.5 * x
    q = sign * half * half
    term = np.exp(nu * np.log(half)) * special.rgamma(1.0 + nu)
    term = np.asarray(term, dtype=complex)
    total = term.copy()
    magnitude = np.abs(term)
    for k in range(1, _MAX_SERIES_TERMS):
        term = term * (q / (k * (k + nu)))
        total += term
        size = np.abs(term)
        magnitude += size
        if k > 2.0 * abs(nu.imag) and np.all(size <= 1e-18 * magnitude):
            break
    else:  # pragma: no cover - x is range-checked before we get here
        raise AccuracyError("power series did not terminate")
    return total, 4.0 * EPS * magnitude


def _negative_integer(nu: complex) -> int | None:
    if nu.imag == 0.0 and nu.real < 0 and float(nu.real).is_integer():
        return int(-nu.real)
    return None


# ---------------------------------------------------------------------------
# Hankel asymptotic expansion
# ---------------------------------------------------------------------------


_CHUNK = 4096


def _hankel_asymptotic(nu: complex, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Large-argument J_nu(x) with optimal truncation.

    J_nu(x) ~ sqrt(2/(pi x)) [P cos w - Q sin w],  w = x - nu pi/2 - pi/4,
    with a_k(nu) = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k).  The sum stops
    before the smallest term, whose size is the absolute error estimate.
    """
    if x.size > _CHUNK:
        parts = [_hankel_asymptotic_block(nu, x[i : i + _CHUNK]) for i in range(0, x.size, _CHUNK)]
        return np.concatenate([v for v, _ in parts]), np.concatenate([e for _, e in parts])
    return _hankel_asymptotic_block(nu, x)


def _hankel_asymptotic_block(nu: complex, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mu4 = 4.0 * nu * nu
    term = np.ones(x.shape, dtype=complex)
    p_run = np.ones(x.shape, dtype=complex)
    q_run = np.zeros(x.shape, dtype=complex)
    abs_run = np.zeros(x.shape)
    p_best, q_best, abs_best = p_run.copy(), q_run.copy(), abs_run.copy()
    best = np.full(x.shape, np.inf)
    for k in range(1, _MAX_ASYMPTOTIC_TERMS + 1):
        factor = (mu4 - (2 * k - 1) ** 2) / (8.0 * k * x)
        term = term * factor
        size = np.abs(term)
        # the optimal truncation keeps everything before the smallest term
        better = size < best
        p_best = np.where(better, p_run, p_best)
        q_best = np.where(better, q_run, q_best)
        abs_best = np.where(better, abs_run, abs_best)
        best = np.where(better, size, best)
        if k % 2 == 0:
            p_run = p_run + (1.0 if (k // 2) % 2 == 0 else -1.0) * term
        else:
            q_run = q_run + (1.0 if ((k - 1) // 2) % 2 == 0 else -1.0) * term
        abs_run = abs_run + size
        # beyond k > |nu| + 1 the factors grow with k, so once one exceeds 1
        # the smallest term has been seen
        done = (best < 1e-17) | ((k > abs(nu) + 1) & (np.abs(factor) >= 1.0))
        if np.all(done):
            break
    w = x - (0.5 * nu + 0.25) * np.pi
    amp = np.sqrt(2.0 / (np.pi * x))
    cw, sw = np.cos(w), np.sin(w)
    value = amp * (p_best * cw - q_best * sw)
    envelope = amp * (np.abs(cw) + np.abs(sw))
    err = envelope * (best + 4.0 * EPS * (1.0 + abs_best))
    return value, err


# ---------------------------------------------------------------------------
# J of complex order
# ---------------------------------------------------------------------------


def _j_complex_positive_x(nu: complex, x: np.ndarray, tolerant: bool) -> tuple[np.ndarray, np.ndarray]:
    n_neg = _negative_integer(nu)
    if n_neg is not None:
        value, err = _j_complex_positive_x(complex(n_neg), x, tolerant)
        return (-1) ** n_neg * value, err
    crossover = max(SERIES_CROSSOVER, 2.0 * abs(nu))
    value = np.empty(x.shape, dtype=complex)
    err = np.empty(x.shape)
    low = x <= crossover
    if np.any(low):
        value[low], err[low] = _power_series(nu, x[low], -1.0)
    if np.any(~low):
        value[~low], err[~low] = _hankel_asymptotic(nu, x[~low])
    rel = err / np.maximum(np.abs(value), np.finfo(float).tiny)
    retry = rel > ACCURACY_TARGET
    if np.any(retry):
        idx = np.flatnonzero(retry)
        xs = x[idx]
        alt_v = np.empty(xs.shape, dtype=complex)
        alt_e = np.empty(xs.shape)
        from_series = low[idx]
        if np.any(from_series):
            alt_v[from_series], alt_e[from_series] = _hankel_asymptotic(nu, xs[from_series])
        if np.any(~from_series):
            alt_v[~from_series], alt_e[~from_series] = _power_series(nu, xs[~from_series], -1.0)
        better = alt_e < err[idx]
        value[idx[better]] = alt_v[better]
        err[idx[better]] = alt_e[better]
        rel = err / np.maximum(np.abs(value), np.finfo(float).tiny)
    worst = float(np.max(rel, initial=0.0))
    if worst > ACCURACY_LIMIT and not tolerant:
        where = float(x[int(np.argmax(rel))])
        raise AccuracyError(
            f"J_{nu}(x) at x={where:g}: estimated relative error {worst:.1e} "
            "exceeds the accuracy limit (catastrophic cancellation)"
        )
    return value, err


def bessel_j_complex_order(nu, x, derivative: int = 0, *, return_error: bool = False, tolerant: bool = False):
    """Bessel function J_nu(x) of complex order for real x >= 0.

    Parameters
    ----------
    nu : complex
        Order.  Purely imaginary orders are the main use; real and mixed
        orders (needed by the derivative recurrences) work as well.
    x : float or array_like
        Non-negative argument.
    derivative : int
        Derivative order n; uses
        J^(n)_nu = 2^-n sum_k (-1)^k C(n,k) J_{nu-n+2k}.
    return_error : bool
        Also return the absolute error estimate.
    tolerant : bool
        Return best-effort values instead of raising AccuracyError.
    """
    nu = complex(nu)
    if abs(nu) >= MAX_ORDER:
        raise DomainError(f"|order| = {abs(nu):g} outside the supported range")
    if derivative < 0:
        raise ValueError("derivative order must be non-negative")
    xs, scalar = _as_float_array(x)
    if np.any(xs < 0) or not np.all(np.isfinite(xs)):
        raise DomainError("Bessel J requires finite x >= 0")
    value = np.zeros(xs.shape, dtype=complex)
    err = np.zeros(xs.shape)
    for k in range(derivative + 1):
        weight = (-1) ** k * comb(derivative, k) / 2.0**derivative
        order = nu - derivative + 2 * k
        v, e = _j_at(order, xs, tolerant)
        value += weight * v
        err += abs(weight) * e
    if return_error:
        return _restore(value, scalar), _restore(err, scalar)
    return _restore(value, scalar)


def _j_at(order: complex, xs: np.ndarray, tolerant: bool) -> tuple[np.ndarray, np.ndarray]:
    value = np.zeros(xs.shape, dtype=complex)
    err = np.zeros(xs.shape)
    zero = xs == 0.0
    if np.any(zero):
        n_neg = _negative_integer(order)
        if order == 0:
            value[zero] = 1.0
        elif order.real > 0 or n_neg is not None:
            value[zero] = 0.0
        else:
            raise SingularityError(f"J_{order}(0) is singular or undefined")
    if np.any(~zero):
        value[~zero], err[~zero] = _j_complex_positive_x(order, xs[~zero], tolerant)
    return value, err


def bessel_j_imag_order(mu, x, derivative: int = 0, *, return_error: bool = False, tolerant: bool = False):
    """J_{i mu}(x) for real mu and x > 0 (complex result).

    A negative ``mu`` gives J_{-i|mu|}; for real x the two are complex
    conjugates of each other.
    """
    mu = float(mu)
    xs, scalar = _as_float_array(x)
    if np.any(xs <= 0):
        raise DomainError("J of imaginary order requires x > 0")
    out = bessel_j_complex_order(1j * mu, xs, derivative, return_error=return_error, tolerant=tolerant)
    if return_error:
        return _restore(out[0], scalar), _restore(out[1], scalar)
    return _restore(out, scalar)


# ---------------------------------------------------------------------------
# real-order J
# ---------------------------------------------------------------------------


def bessel_j(order, x, derivative: int = 0):
    """J_order(x) for real order and x >= 0 (scipy backend).

    Raises
    ------
    DomainError
        x < 0 or |order| >= 1e4.
    SingularityError
        x = 0 with a negative non-integer order.
    """
    order = float(order)
    if abs(order) >= MAX_ORDER:
        raise DomainError(f"|order| = {abs(order):g} outside the supported range")
    xs, scalar = _as_float_array(x)
    if np.any(xs < 0) or not np.all(np.isfinite(xs)):
        raise DomainError("Bessel J requires finite x >= 0")
    if order < 0 and not order.is_integer() and np.any(xs == 0.0):
        raise SingularityError(f"J_{order}(0) diverges")
    if derivative == 0:
        value = special.jv(order, xs)
    else:
        value = special.jvp(order, xs, derivative)
    return _restore(np.asarray(value, dtype=float), scalar)


def bessel_y(order, x, derivative: int = 0):
    """Y_order(x) for real order and x > 0 (scipy backend)."""
    xs, scalar = _as_float_array(x)
    if np.any(xs <= 0):
        raise DomainError("Bessel Y requires x > 0")
    value = special.yv(order, xs) if derivative == 0 else special.yvp(order, xs, derivative)
    return _restore(np.asarray(value, dtype=float), scalar)


def hankel1(order, x):
    """H^(1)_order(x) for real order and x > 0 (scipy backend)."""
    xs, scalar = _as_float_array(x)
    if np.any(xs <= 0):
        raise DomainError("Hankel functions require x > 0")
    return _restore(np.asarray(special.hankel1(order, xs), dtype=complex), scalar)


# ---------------------------------------------------------------------------
# I and K of imaginary order
# ---------------------------------------------------------------------------

# largest x for which e^x stays representable with headroom
_I_MAX_X = 700.0


def _i_at(order: complex, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if np.any(xs > _I_MAX_X):
        raise DomainError(f"I_nu(x) overflows for x > {_I_MAX_X:g}")
    n_neg = _negative_integer(order)
    if n_neg is not None:
        return _power_series(complex(n_neg), xs, 1.0)
    return _power_series(order, xs, 1.0)


def bessel_i_imag_order(mu, x, derivative: int = 0, *, return_error: bool = False):
    """Modified Bessel I_{i mu}(x) for real mu and x > 0 (complex result).

    Derivatives follow I^(n)_nu = 2^-n sum_k C(n,k) I_{nu-n+2k}.
    """
    mu = float(mu)
    xs, scalar = _as_float_array(x)
    if np.any(xs <= 0) or not np.all(np.isfinite(xs)):
        raise DomainError("I of imaginary order requires finite x > 0")
    nu = 1j * mu
    value = np.zeros(xs.shape, dtype=complex)
    err = np.zeros(xs.shape)
    for k in range(derivative + 1):
        weight = comb(derivative, k) / 2.0**derivative
        v, e = _i_at(nu - derivative + 2 * k, xs)
        value += weight * v
        err += weight * e
    if return_error:
        return _restore(value, scalar), _restore(err, scalar)
    return _restore(value, scalar)


def _k_from_i(mu: float, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ip, ep = _i_at(1j * mu, xs)
    im, em = _i_at(-1j * mu, xs)
    factor = np.pi / (2.0 * np.sinh(np.pi * mu))
    # (I_{-i mu} - I_{i mu}) / i  is real: -2 Im(I_{i mu}) up to rounding
    value = factor * ((im - ip) / 1j).real
    return value, factor * (ep + em)


def _k_series_limit(mu: float) -> float:
    # the I-difference loses ~ e^{2x} / (2 sinh(pi mu)) relative digits, the
    # integral ~ 10 eps once K is no longer suppressed; switch where they meet
    return max(_K_SERIES_X, 0.5 * np.log(20.0 * np.sinh(np.pi * min(mu, 200.0))))


@functools.lru_cache(maxsize=None)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _k_integral(mu: float, xs: np.ndarray, derivative: int) -> tuple[np.ndarray, np.ndarray]:
    """(-1)^n int_0^T cosh^n(t) e^{-x cosh t} cos(mu t) dt, GL with doubling."""
    pad = derivative * np.log1p(100.0 / xs)
    upper = np.arccosh(1.0 + (_K_CUT + pad) / xs)
    n_nodes = 64
    previous = None
    while True:
        u, w = _leggauss(n_nodes)
        t = 0.5 * upper[None, :] * (1.0 + u[:, None])
        ch = np.cosh(t)
        integrand = np.exp(-xs[None, :] * (ch - 1.0)) * np.cos(mu * t)
        if derivative:
            integrand = integrand * ch**derivative
        weighted = w[:, None] * integrand * (0.5 * upper[None, :])
        current = np.sum(weighted, axis=0)
        scale = np.sum(np.abs(weighted), axis=0)
        if previous is not None:
            diff = np.abs(current - previous)
            # summation rounding grows like sqrt(n) eps * sum |terms|
            if np.all(diff <= 32.0 * np.sqrt(n_nodes) * EPS * scale) or n_nodes >= 4096:
                break
        previous = current
        n_nodes *= 2
    err = np.abs(current - previous) + 8.0 * EPS * scale
    damp = np.exp(-xs)
    sign = (-1.0) ** derivative
    return sign * damp * current, damp * err


def bessel_k_imag_order(mu, x, derivative: int = 0, *, return_error: bool = False):
    """Real-valued K_{i mu}(x) for mu > 0, x > 0.

    K_{i mu}(x) = int_0^inf exp(-x cosh t) cos(mu t) dt.  For x <= 1 the
    I-combination is used instead (no cancellation there); for large mu the
    I-path stays more accurate up to x ~ 0.5 ln(20 sinh(pi mu)) and is used
    up to that point.  Derivatives with respect to x always come from the
    differentiated integral.  Setting the environment variable
    ``ABSCATTER_DEBUG_K=1`` cross-checks both paths wherever the I-path is
    taken.

    Raises
    ------
    DomainError
        x <= 0.
    """
    mu = abs(float(mu))
    xs, scalar = _as_float_array(x)
    if np.any(xs <= 0) or not np.all(np.isfinite(xs)):
        raise DomainError("K of imaginary order requires finite x > 0")
    value = np.zeros(xs.shape)
    err = np.zeros(xs.shape)
    huge = xs > _I_MAX_X
    use_series = (xs <= _k_series_limit(mu)) & (mu >= _K_SERIES_MIN_MU) & (derivative == 0)
    use_integral = ~use_series & ~huge
    if np.any(use_series):
        value[use_series], err[use_series] = _k_from_i(mu, xs[use_series])
        if _debug_k():
            check, check_err = _k_integral(mu, xs[use_series], 0)
            gap = np.max(np.abs(check - value[use_series]), initial=0.0)
            if gap > 1e-9 * max(1.0, float(np.max(np.abs(check), initial=0.0))):
                warnings.warn(f"K_i{mu}: series/integral paths differ by {gap:.2e}", RuntimeWarning)
    if np.any(use_integral):
        value[use_integral], err[use_integral] = _k_integral(mu, xs[use_integral], derivative)
    if return_error:
        return _restore(value, scalar), _restore(err, scalar)
    return _restore(value, scalar)


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------


def arg_gamma_one_plus_imu(mu):
    """xi(mu) = arg Gamma(1 + i mu) on the continuous branch with xi(0) = 0.

    Taken as the imaginary part of scipy's log-Gamma, which is the analytic
    continuation along the line 1 + i mu (not reduced mod 2 pi).
    """
    mus = np.asarray(mu, dtype=float)
    if np.any(np.abs(mus) >= 1e3) or not np.all(np.isfinite(mus)):
        raise DomainError("arg Gamma(1 + i mu) supported for |mu| < 1e3")
    value = special.loggamma(1.0 + 1j * mus).imag
    return float(value) if np.ndim(value) == 0 else value


def gamma_ratio(mu: float) -> float:
    """Gamma(1 + mu) / Gamma(1 - mu) for real mu (not a negative integer pole)."""
    return float(np.exp(special.gammaln(1.0 + mu) - special.gammaln(1.0 - mu)) * special.gammasgn(1.0 + mu) * special.gammasgn(1.0 - mu))
