"""
verification.py - Oracle checks for each layer of the laboratory

Every check compares a computed quantity with an exact or independently
known value and reports the discrepancy against a threshold. Suites:
phase, scattering, evolution, scalar_rhp, model_rhp, asymptotics, all.
"""

import cmath
import logging
import math
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import loggamma

from .asymptotics import envelope_ratio, leading_order_assembled, leading_order_closed_form
from .evolution import WaveField, convergence_errors, evolve, linear_exact_evolve, nonlinear_rhs
from .exceptions import MkdvLabError, ValidationError
from .model_rhp import arg_gamma, beta_constants, log_gamma, parabolic_cylinder_U, wronskian_report
from .models_pydantic import CheckResult, Tolerances, VerificationReport
from .phase import ALPHA_MAX, c_alpha, ray_bound_violations, theta, theta_derivative, theta_expansion, x_on_ray, z0_from_ray
from .potentials import box, gaussian, sample_periodic, zero
from .scalar_rhp import ReflectionFunction, ScalarRHPData, chi, chi_endpoint, delta, delta_boundary, phi_integral
from .scattering import scatter, symmetric_zgrid
from .utils import wrap_angle

logger = logging.getLogger(__name__)

# (value, threshold, detail); the check passes when value <= threshold
Outcome = Tuple[float, float, str]

ARG_GAMMA_MINUS_I = 1.87243665
RAY_Z0 = 0.7


def _sample_reflection(zmax: float = 4.0) -> ReflectionFunction:
    """r(s) = 0.4 exp(-s^2) exp(0.3 i s); conjugate-symmetric, sup |r| = 0.4."""
    return ReflectionFunction.from_function(lambda s: 0.4 * np.exp(-s * s) * np.exp(0.3j * s), np.linspace(-zmax, zmax, 81))


# Phase


def _theta_stationary() -> Outcome:
    worst = max(abs(float(theta_derivative(s * z0, z0))) / z0**4 for z0 in (0.5, 0.7, 1.3) for s in (-1, 1))
    return worst, 1e-12, "theta'(+/- z0) = 0"


def _theta_expansion() -> Outcome:
    z0 = RAY_Z0
    z = np.linspace(-2.0, 2.0, 41) + 0.3j
    worst = float(np.max(np.abs(theta(z, z0) - theta_expansion(z, z0)) / (1.0 + np.abs(theta(z, z0)))))
    return worst, 1e-12, "expansion about z0 is exact"


def _ray_roundtrip() -> Outcome:
    worst = max(abs(z0_from_ray(x_on_ray(z0, t), t) - z0) for z0 in (0.3, 0.7, 1.1) for t in (1.0, 25.0, 200.0))
    return worst, 1e-12, "z0(x(z0, t), t) = z0"


def _ray_bound() -> Outcome:
    count = sum(ray_bound_violations(ALPHA_MAX / 2, z0) for z0 in (0.5, 1.0, 2.0))
    count += sum(ray_bound_violations(alpha, RAY_Z0) for alpha in (ALPHA_MAX / 4, ALPHA_MAX))
    return float(count), 0.0, f"c(pi/16) = {c_alpha(ALPHA_MAX / 2):.6f}, c(pi/8) = {c_alpha(ALPHA_MAX):.6f}"


# Scattering


def _zero_potential() -> Outcome:
    sd = scatter(zero(), symmetric_zgrid(2.0, 21))
    return float(max(np.max(np.abs(sd.a - 1.0)), np.max(np.abs(sd.b)))), 1e-14, "a = 1, b = 0"


def _box_at_origin() -> Outcome:
    sd = scatter(box(1.0, 1.0), np.array([0.0]))
    return abs(complex(sd.r[0]) - math.tanh(1.0)), 1e-8, "r(0) = tanh(1)"


def _born_at_origin() -> Outcome:
    eps = 1e-3
    sd = scatter(gaussian(eps, 1.0), np.array([0.0]))
    exact = -math.sinh(eps * math.sqrt(math.pi))
    return abs(complex(sd.b[0]) - exact), 1e-10, "b(0) = -sinh(eps sqrt(pi))"


def _gaussian_defects(tol: Tolerances) -> Outcome:
    sd = scatter(gaussian(0.3, 1.0), symmetric_zgrid(2.0, 41))
    worst = max(sd.unitarity_defect() / tol.unitarity, sd.symmetry_defect() / tol.symmetry)
    return worst, 1.0, "unitarity and symmetry defects over their tolerances"


# Evolution


def _sine_mode_flux() -> Outcome:
    n, k = 64, 1.0
    f = WaveField(np.sin(k * (-math.pi + 2.0 * math.pi * np.arange(n) / n)), 2.0 * math.pi)
    s, c = np.sin(k * f.x), np.cos(k * f.x)
    expected = 30.0 * k * s**4 * c + 50.0 * k**3 * s**2 * c - 10.0 * k**3 * c**3
    return float(np.max(np.abs(nonlinear_rhs(f).samples - expected))), 1e-10, "dealiased flux of sin(x)"


def _invariants(tol: Tolerances) -> Outcome:
    _, q = sample_periodic("gaussian:0.3,1", 2048, 512.0)
    result = evolve(WaveField(q, 512.0), 50.0, 5e-4, checkpoints=[10.0, 20.0, 30.0, 40.0], wrap_guard_tol=1.0)
    mass_drift = max(r.mass_drift for r in result.drift_log)
    l2_drift = max(r.l2_drift for r in result.drift_log)
    worst = max(mass_drift / tol.mass_drift, l2_drift / tol.l2_drift)
    return worst, 1.0, f"t in [0, 50]: mass drift {mass_drift:.1e}, L2 drift {l2_drift:.1e}"


def _linear_limit() -> Outcome:
    _, q = sample_periodic("gaussian:0.00001,1", 512, 64.0)
    f = WaveField(q, 64.0)
    result = evolve(f, 10.0, 1e-2, wrap_guard_tol=1.0)
    gap = float(np.max(np.abs(result.final.samples - linear_exact_evolve(f, 10.0).samples)))
    return gap, 1e-10, "amplitude 1e-5 against exp(i k^5 t) at t = 10"


def _dealiasing() -> Outcome:
    _, q = sample_periodic("gaussian:0.3,1", 256, 32.0)
    f = WaveField(q, 32.0)
    base = evolve(f, 0.1, 1e-3, wrap_guard_tol=1.0).final.samples
    doubled = evolve(f, 0.1, 1e-3, padding=6, wrap_guard_tol=1.0).final.samples
    return float(np.max(np.abs(doubled - base))), 1e-10, "padding 3 against padding 6"


def _time_order() -> Outcome:
    # a single mode 2 pi / L on 16 points: every retained k^5 and nonlinear rate is O(1)
    length = 16.0 * math.pi
    x = -0.5 * length + (length / 16) * np.arange(16)
    f = WaveField(0.4 * np.cos(x / 8.0), length)
    errors = convergence_errors(f, 1.0, (0.1, 0.05, 0.025))
    ratios = [a / b for a, b in zip(errors, errors[1:])]
    worst = max(abs(r - 16.0) for r in ratios)
    return worst, 3.0, "error ratios " + ", ".join(f"{r:.2f}" for r in ratios) + " under dt halving"


# Scalar RHP


def _zero_reflection() -> Outcome:
    sd = ScalarRHPData(ReflectionFunction.zero(), RAY_Z0)
    worst = max(abs(delta(z, sd) - 1.0) for z in (0.2 + 0.1j, -1.0 + 0.5j, 3.0j))
    return worst + sd.nu, 1e-14, "delta = 1, nu = 0"


def _constant_modulus() -> Outcome:
    z0 = RAY_Z0
    sd = ScalarRHPData(ReflectionFunction.from_function(lambda s: 0.5 + 0.0 * s, np.linspace(-4.0, 4.0, 9)), z0)
    worst = 0.0
    for z in (0.3 + 0.2j, -0.5 - 0.4j, 2.0j, 1.5 + 0.0j):
        exact = cmath.exp(1j * sd.nu * cmath.log((z - z0) / (z + z0)))
        worst = max(worst, abs(chi(z, sd)), abs(delta(z, sd) - exact))
    return worst, 1e-10, "chi = 0 and delta = ((z - z0)/(z + z0))^(i nu)"


def _boundary_limit() -> Outcome:
    sd = ScalarRHPData(_sample_reflection(), RAY_Z0)
    s, eps = 0.2, 1e-7
    upper = abs(delta_boundary(s, "+", sd) - delta(complex(s, eps), sd))
    lower = abs(delta_boundary(s, "-", sd) - delta(complex(s, -eps), sd))
    return max(upper, lower), 1e-5, "delta_(+/-)(s) are limits of delta(s +/- i eps)"


def _boundary_product() -> Outcome:
    sd = ScalarRHPData(_sample_reflection(), RAY_Z0)
    worst = 0.0
    for s in np.linspace(-0.6, 0.6, 7):
        plus, minus = delta_boundary(s, "+", sd), delta_boundary(s, "-", sd)
        worst = max(worst, abs(abs(plus * minus) - 1.0))
    return worst, 1e-8, "|delta_+ delta_-| = 1 on the cut"


def _jump_relation() -> Outcome:
    sd = ScalarRHPData(_sample_reflection(), RAY_Z0)
    worst = 0.0
    for s in np.linspace(-0.6, 0.6, 7):
        r2 = abs(complex(sd.reflection(np.array([s]))[0])) ** 2
        worst = max(worst, abs(delta_boundary(s, "+", sd) - delta_boundary(s, "-", sd) * (1.0 - r2)))
    return worst, 1e-6, "delta_+ = delta_- (1 - |r|^2)"


def _endpoint_regularity() -> Outcome:
    sd = ScalarRHPData(_sample_reflection(), RAY_Z0)
    base = chi_endpoint(sd, 1)
    ratios = []
    for k in range(1, 7):
        w = 10.0**-k * cmath.exp(0.25j * math.pi) * RAY_Z0
        ratios.append(abs(chi(RAY_Z0 + w, sd) - base) / (abs(w) * abs(math.log(abs(w)))))
    return max(ratios), 1.0, "|chi(z0 + w) - chi(z0)| / (|w| |log |w||) over six decades"


def _endpoint_modulus() -> Outcome:
    sd = ScalarRHPData(_sample_reflection(), RAY_Z0)
    a, b = chi_endpoint(sd, -1), chi_endpoint(sd, 1)
    return max(abs(a.real), abs(b + a)), 1e-10, "|delta_A0| = 1 and chi(z0) = -chi(-z0)"


# Model RHP


def _arg_gamma_value() -> Outcome:
    return abs(arg_gamma(-1j) - ARG_GAMMA_MINUS_I), 1e-8, "arg Gamma(-i)"


def _log_gamma_oracle() -> Outcome:
    points = (0.3 - 0.7j, -0.4j, 2.5 + 1.0j, -1.3 + 0.2j, 7.0 - 3.0j)
    worst = max(abs(cmath.exp(log_gamma(w) - complex(loggamma(w))) - 1.0) for w in points)
    return worst, 1e-11, "Lanczos against scipy.special.loggamma"


def _pcf_elementary() -> Outcome:
    worst = max(abs(parabolic_cylinder_U(-0.5, z) / math.exp(-z * z / 4.0) - 1.0) for z in (0.5, 2.0, 5.0))
    return worst, 1e-8, "U(-1/2, z) = exp(-z^2/4)"


WRONSKIAN_NUS = (0.1, 0.5, 1.0)


def _wronskian_match() -> Outcome:
    worst = max(wronskian_report(complex(-0.5, -nu))["relative_error"] for nu in WRONSKIAN_NUS)
    return worst, 1e-6, "W{U(a, z), U(a, -z)} = sqrt(2 pi)/Gamma(1/2 + a)"


def _wronskian_spread() -> Outcome:
    worst = max(wronskian_report(complex(-0.5, -nu))["spread"] for nu in WRONSKIAN_NUS)
    return worst, 1e-8, "Wronskian constant over z in {1, 2, 4}"


def _beta_cases():
    for nu_value in (0.01, 0.1, 0.4):
        r = cmath.sqrt(-math.expm1(-2.0 * math.pi * nu_value)) * cmath.exp(0.7j)
        for branch, modulus in (("exp-weighted", nu_value * math.exp(2 * math.pi * nu_value)), ("modulus-normalized", nu_value)):
            yield nu_value, beta_constants(nu_value, r, branch), modulus


def _beta_product() -> Outcome:
    worst = max(abs(c.beta12 * c.beta21 + nu_value) for nu_value, c, _ in _beta_cases())
    return worst, 1e-14, "beta12 beta21 = -nu"


def _beta_modulus() -> Outcome:
    worst = max(abs(abs(c.beta12) ** 2 / modulus - 1.0) for _, c, modulus in _beta_cases())
    return worst, 1e-12, "|beta12|^2 = nu exp(2 pi nu) (exp-weighted) or nu (normalized)"


# Asymptotics


def _envelope_ratios() -> Outcome:
    sd = ScalarRHPData(_sample_reflection(), RAY_Z0)
    worst = 0.0
    for t in (50.0, 200.0):
        x = x_on_ray(RAY_Z0, t)
        closed = leading_order_closed_form(x, t, sd)
        for branch in ("exp-weighted", "modulus-normalized"):
            ratio = leading_order_assembled(x, t, sd, branch).envelope / closed.envelope
            worst = max(worst, abs(ratio / envelope_ratio(sd.nu, branch) - 1.0))
    return worst, 1e-8, "assembled / closed envelope"


def _phase_offset() -> Outcome:
    sd = ScalarRHPData(_sample_reflection(), RAY_Z0)
    target = -2.0 * phi_integral(sd)
    worst = 0.0
    for t in (25.0, 100.0, 400.0):
        x = x_on_ray(RAY_Z0, t)
        gap = leading_order_assembled(x, t, sd).cos_argument - leading_order_closed_form(x, t, sd).cos_argument
        worst = max(worst, abs(wrap_angle(gap - target)))
    return worst, 1e-8, f"assembled - closed phase = -2 phi_integral = {target:.6f}"


def _decay_exponent() -> Outcome:
    sd = ScalarRHPData(_sample_reflection(), RAY_Z0)
    times = np.array([25.0, 50.0, 100.0, 200.0])
    env = [leading_order_closed_form(x_on_ray(RAY_Z0, t), t, sd).envelope for t in times]
    slope = float(np.polyfit(np.log(times), np.log(env), 1)[0])
    return abs(slope + 0.5), 1e-12, f"envelope ~ t^{slope:.6f}"


CheckFunc = Callable[[Tolerances], Outcome]

SUITES: Dict[str, List[Tuple[str, CheckFunc]]] = {
    "phase": [
        ("theta_stationary", lambda tol: _theta_stationary()),
        ("theta_expansion", lambda tol: _theta_expansion()),
        ("ray_roundtrip", lambda tol: _ray_roundtrip()),
        ("ray_bound", lambda tol: _ray_bound()),
    ],
    "scattering": [
        ("zero_potential", lambda tol: _zero_potential()),
        ("box_at_origin", lambda tol: _box_at_origin()),
        ("born_at_origin", lambda tol: _born_at_origin()),
        ("gaussian_defects", _gaussian_defects),
    ],
    "evolution": [
        ("sine_mode_flux", lambda tol: _sine_mode_flux()),
        ("invariants", _invariants),
        ("linear_limit", lambda tol: _linear_limit()),
        ("dealiasing", lambda tol: _dealiasing()),
        ("time_order", lambda tol: _time_order()),
    ],
    "scalar_rhp": [
        ("zero_reflection", lambda tol: _zero_reflection()),
        ("constant_modulus", lambda tol: _constant_modulus()),
        ("boundary_limit", lambda tol: _boundary_limit()),
        ("boundary_product", lambda tol: _boundary_product()),
        ("jump_relation", lambda tol: _jump_relation()),
        ("endpoint_regularity", lambda tol: _endpoint_regularity()),
        ("endpoint_modulus", lambda tol: _endpoint_modulus()),
    ],
    "model_rhp": [
        ("arg_gamma", lambda tol: _arg_gamma_value()),
        ("log_gamma_oracle", lambda tol: _log_gamma_oracle()),
        ("pcf_elementary", lambda tol: _pcf_elementary()),
        ("wronskian", lambda tol: _wronskian_match()),
        ("wronskian_spread", lambda tol: _wronskian_spread()),
        ("beta_product", lambda tol: _beta_product()),
        ("beta_modulus", lambda tol: _beta_modulus()),
    ],
    "asymptotics": [
        ("envelope_ratio", lambda tol: _envelope_ratios()),
        ("phase_offset", lambda tol: _phase_offset()),
        ("decay_exponent", lambda tol: _decay_exponent()),
    ],
}


def run_check(name: str, suite: str, func: CheckFunc, tol: Tolerances) -> CheckResult:
    """Run one check; library errors become failed checks carrying the message."""
    try:
        value, threshold, detail = func(tol)
    except MkdvLabError as e:
        logger.error("Check %s/%s raised %s", suite, name, e)
        return CheckResult(name=name, suite=suite, passed=False, value=float("nan"), threshold=0.0, detail=str(e))
    passed = bool(np.isfinite(value) and value <= threshold)
    log = logger.info if passed else logger.warning
    log("%s/%s: %.3e (threshold %.1e) %s", suite, name, value, threshold, "ok" if passed else "FAILED")
    return CheckResult(name=name, suite=suite, passed=passed, value=float(value), threshold=float(threshold), detail=detail)


def verify(suite: str = "all", tolerances: Optional[Tolerances] = None) -> VerificationReport:
    """
    Run one suite, or every suite with ``suite="all"``.

    Raises:
        ValidationError: unknown suite name
    """
    if suite != "all" and suite not in SUITES:
        raise ValidationError(f"Unknown verification suite '{suite}'; choose from {', '.join(list(SUITES) + ['all'])}")
    tol = tolerances or Tolerances()
    report = VerificationReport(suite=suite)
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        for check_name, func in SUITES[name]:
            report.checks.append(run_check(check_name, name, func, tol))
    return report
