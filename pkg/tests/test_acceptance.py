"""
Acceptance checks.  Each criterion prints one PASS/FAIL line with the
measured numbers, both under pytest (the line bypasses output capture) and
when run as a script: ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import cmath
import math
import sys
import time

import numpy as np
import pytest

from abscatter.bound_states import BoundState, bound_orthogonality, ladder_ratio, spectrum
from abscatter.cross_sections import eta_sweep, sigma1, sigma1_asymptotes, sigma_parseval, sigma_total
from abscatter.modes import ExtensionParams, PhysicalParams, Regime, classify_mode, preset_extension, shared_p0
from abscatter.ortho import (
    admissible_coefficients,
    check_nc,
    closed_form_opposite_order,
    hardcore_theta_scan,
    integral_jj_opposite_order,
    integral_jj_same_order,
)
from abscatter.radial import boundary_data, custom_state, radial_current, scattering_state
from abscatter.smatrix import s_hardcore, s_value

SEED = 20261014


def criterion_1():
    start = time.perf_counter()
    value = sigma1(0.9)
    elapsed = time.perf_counter() - start
    return abs(value - 3.48) <= 0.05 and elapsed < 1.0, f"Sigma_1(0.9) = {value:.6f} (3.48 +- 0.05), {elapsed * 1e3:.1f} ms (< 1 s)"


def criterion_2():
    ratio = sigma1(0.1) / sigma1_asymptotes(0.1)[0]
    return 0.95 <= ratio <= 1.05, f"Sigma_1(0.1) / (pi^4 gamma^4 / 24) = {ratio:.5f} in [0.95, 1.05]"


def criterion_3():
    # tolerance frozen at 10% after the first run (observed ratio 0.987)
    ratio = sigma1(30.0) / sigma1_asymptotes(30.0)[1]
    return abs(ratio - 1.0) <= 0.10, f"Sigma_1(30) / (pi^2 gamma^2 / 2) = {ratio:.5f} within 10%"


def criterion_4():
    phis = np.linspace(0.1, math.pi, 60)
    worst = 0.0
    for beta in (0.25, 0.5, 0.75):
        params = PhysicalParams(beta=beta, gamma=0.0)
        for s in eta_sweep(phis, params, preset_extension("hardcore-limit"), 1.0):
            exact = math.sin(math.pi * beta) ** 2 / math.sin(s.x / 2) ** 2
            worst = max(worst, abs(s.value - exact) / exact)
    return worst < 1e-10, f"max relative deviation from sin^2(pi beta)/sin^2(phi/2) = {worst:.2e} (< 1e-10)"


def criterion_5():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    seen = {r: 0 for r in Regime}
    n = 0
    while n < 1000:
        beta, gamma = rng.uniform(0, 1), rng.uniform(0, 12)
        m = int(rng.integers(-15, 16))
        params = PhysicalParams(beta=beta, gamma=gamma)
        if abs((m - params.beta) ** 2 - gamma**2) < 1e-9:
            continue
        mode = classify_mode(params, m)
        ext = ExtensionParams(default_lambda=float(rng.normal(0, 5)), default_theta=float(rng.uniform(0, 2 * math.pi)))
        p = float(10 ** rng.uniform(-3, 3))
        worst = max(worst, abs(abs(s_value(mode, ext, p)) - 1.0), abs(abs(s_hardcore(mode, p, 1e-3).s) - 1.0))
        seen[mode.regime] += 1
        n += 1
    covered = all(v > 0 for v in seen.values())
    counts = ", ".join(f"{k.value} {v}" for k, v in seen.items())
    return worst < 1e-12 and covered, f"max ||S| - 1| = {worst:.1e} over {n} samples ({counts})"


def criterion_6():
    worst_rel = 0.0
    for nu in (0.1, 0.3, 0.5, 0.7, 0.9):
        for r in (1.5, 2.0, 2.5, 3.0, 4.0):
            closed = closed_form_opposite_order(nu, 1.0, r).real
            worst_rel = max(worst_rel, abs(integral_jj_opposite_order(nu, 1.0, r).value - closed) / abs(closed))
    worst_abs = max(abs(integral_jj_same_order(nu, 1.0, pp).value) for nu, pp in ((0.3, 2.0), (1.0, 3.0), (0.7, 1.5)))
    return worst_rel < 1e-4 and worst_abs < 1e-4, f"opposite-order max rel err {worst_rel:.2e} (< 1e-4), same-order max |value| {worst_abs:.2e} (< 1e-4)"


def criterion_7():
    rng = np.random.default_rng(SEED + 7)
    inter = classify_mode(PhysicalParams(beta=0.0, gamma=0.9), 1)
    sup = classify_mode(PhysicalParams(beta=0.0, gamma=0.9), 0)
    wrong = 0
    for i in range(200):
        admissible = i < 100
        mode = sup if i % 2 else inter
        p = float(rng.uniform(0.2, 5.0))
        pp = p + float(rng.choice([-1, 1]) * rng.uniform(0.1, 2.0))
        pp = pp if pp > 0.05 else p + 1.0
        scale_p = complex(*rng.normal(size=2))
        scale_pp = complex(*rng.normal(size=2))
        alpha = float(rng.uniform(0.2, math.pi - 0.2))
        if mode is sup:
            theta = float(rng.uniform(0, 2 * math.pi))
            second = theta if admissible else theta + alpha
            a, b = zip(admissible_coefficients(mode, p, theta, scale_p), admissible_coefficients(mode, pp, second, scale_pp))
        else:
            lam = float(rng.choice([-1, 1]) * 10 ** rng.uniform(-1, 1))
            lam_c = lam if admissible else lam * cmath.exp(1j * alpha)
            a, b = zip(admissible_coefficients(mode, p, lam_c, scale_p), admissible_coefficients(mode, pp, lam_c, scale_pp))
        orthogonal, _ = check_nc(mode, a, b, p, pp, 1e-6)
        wrong += orthogonal != admissible
    return wrong == 0, f"{wrong} misclassified of 100 admissible + 100 violating pairs at tol 1e-6"


def criterion_8():
    mode = classify_mode(PhysicalParams(beta=0.0, gamma=0.9), 0)
    states = spectrum(mode, 1.0, 0, 3)
    ratio_err = max(abs(b.p / a.p / ladder_ratio(mode.mu) - 1.0) for a, b in zip(states, states[1:]))
    overlaps = [abs(bound_orthogonality(mode, a, b)) for i, a in enumerate(states) for b in states[i + 1 :]]
    p_off = math.exp(-math.pi / (2 * mode.mu))
    off = BoundState(m=0, n=0, p=p_off, energy=-p_off**2 / 2, mu=mode.mu, p_m0=p_off)
    control = abs(bound_orthogonality(mode, states[0], off))
    ok = ratio_err < 1e-14 and max(overlaps) < 1e-6 and control > 1e-2
    return ok, f"ratio error {ratio_err:.1e}, max ladder overlap {max(overlaps):.1e} (< 1e-6), off-ladder overlap {control:.3f} (> 1e-2)"


def criterion_9():
    radii = np.array([0.01, 0.3, 1.0, 8.0, 70.0])
    params = PhysicalParams(beta=0.0, gamma=0.9)
    ext = ExtensionParams(lambdas={1: 0.7, -1: -0.4}, theta={0: 1.3})
    p, mass = 1.7, 1.0
    worst = 0.0
    for m in (0, 1, 3):
        j = radial_current(scattering_state(classify_mode(params, m), ext, p), radii, mass)
        worst = max(worst, float(np.max(np.abs(j))))
    control = radial_current(custom_state(classify_mode(params, 0), p, 0.0, 1.0), radii, mass)
    ok = worst < 1e-10 * p / mass and bool(np.all(np.abs(control) > 1e-3))
    return ok, f"max |j| admissible (3 regimes) = {worst:.1e} (< {1e-10 * p / mass:.1e}), pure J_(i mu) min |j| = {np.min(np.abs(control)):.3e}"


def criterion_10():
    ladder = np.geomspace(1e-2, 1e-7, 11)
    fits = []
    decreasing = True
    for params, m in ((PhysicalParams(beta=0.5, gamma=0.0), 0), (PhysicalParams(beta=0.0, gamma=0.9), 1)):
        mode = classify_mode(params, m)
        target = cmath.exp(1j * math.pi * (m - mode.mu))
        dev = np.array([abs(s_hardcore(mode, 1.0, r).s - target) for r in ladder])
        fits.append((float(np.polyfit(np.log(ladder), np.log(dev), 1)[0]), 2 * mode.mu))
        decreasing = decreasing and bool(np.all(np.diff(dev) < 0))
    slopes_ok = all(abs(slope / expected - 1) <= 0.1 for slope, expected in fits)
    slope_text = ", ".join(f"{slope:.4f} vs {expected:.4f}" for slope, expected in fits)
    sup = classify_mode(PhysicalParams(beta=0.0, gamma=0.9), 0)
    # a finite core shifts each step by ~0.25 (p rho0)^2, so the ladder starts at p rho0 = 1e-4
    sladder = 1e-4 * math.exp(-math.pi / sup.mu) ** np.arange(5)
    theta = hardcore_theta_scan(sup, 1.0, sladder)
    step_err = float(np.max(np.abs((theta[:-1] - theta[1:]) - 2 * math.pi)))
    ok = decreasing and slopes_ok and step_err < 1e-8
    return ok, f"log-log slope vs 2 mu: {slope_text} (+-10%), theta step error {step_err:.1e} for p rho0 <= 1e-4 (< 1e-8)"


def criterion_11():
    params = PhysicalParams(beta=0.5, gamma=9.9)
    ext = preset_extension("hardcore-limit")
    small = np.linspace(1e-3, 0.05, 25)[:-1]
    a = np.array([s.value for s in eta_sweep(small, params, ext, 1.0, p0=1.0)])
    b = np.array([s.value for s in eta_sweep(small, params, ext, 1.0, p0=1.0 / 80.0)])
    rel = float(np.max(np.abs(a - b) / a))
    large = np.linspace(1.0, 3.0, 401)
    counts = []
    for p0 in (1.0, 1.0 / 80.0):
        values = np.array([s.value for s in eta_sweep(large, params, ext, 1.0, p0=p0)])
        counts.append(int(np.sum(np.diff(np.sign(np.diff(values))) != 0)))
    ok = rel < 0.05 and min(counts) >= 3
    return ok, f"small-angle max rel diff {rel:.3%} (< 5%), extrema on [1, 3]: {counts[0]} (p/p0=1), {counts[1]} (p/p0=80) (>= 3)"


def criterion_12():
    params = PhysicalParams(beta=0.0, gamma=0.9)
    ext = shared_p0(10.0)
    value, _ = sigma_parseval(params, ext, 1.0)
    sigma = sigma_total(params, ext, 1.0).sigma
    rel = abs(value - sigma) / sigma
    return rel < 1e-4, f"partial-wave sigma {sigma:.10f}, angular quadrature {value:.10f}, rel diff {rel:.1e} (< 1e-4)"


def criterion_13():
    params = PhysicalParams(beta=0.0, gamma=0.9)
    ext = ExtensionParams(lambdas={1: 0.7, -1: -0.4}, theta={0: 1.3}, mass=1.0)
    ls, varthetas = [], []
    for p in (0.5, 1.0, 2.0):
        window = (1e-4 / p, 1e-2 / p)
        ls.append(boundary_data(classify_mode(params, 1), ext, p, window).l)
        varthetas.append(boundary_data(classify_mode(params, 0), ext, p, window).vartheta)
    dl = (max(ls) - min(ls)) / abs(ls[0])
    dv = max(varthetas) - min(varthetas)
    return dl < 1e-8 and dv < 1e-8, f"l spread {dl:.1e} (relative), vartheta spread {dv:.1e} rad, both < 1e-8"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 14)}


def _report(n: int) -> bool:
    passed, detail = CRITERIA[n]()
    print(f"{'PASS' if passed else 'FAIL'} criterion {n}: {detail}", flush=True)
    return passed


@pytest.mark.parametrize("n", list(CRITERIA))
def test_criterion(n, capsys):
    with capsys.disabled():
        print()
        passed = _report(n)
    assert passed


if __name__ == "__main__":
    results = [_report(n) for n in CRITERIA]
    sys.exit(0 if all(results) else 1)
