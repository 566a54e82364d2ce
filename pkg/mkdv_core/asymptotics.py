"""
asymptotics.py - Leading-order long-time solution in the oscillation region x < 0

Closed form:
    q(x, t) ~ -2 sqrt(nu / (640 t z0^3)) cos(-128 t z0^5 + nu log(2560 t z0^5) + phi(z0))

Assembled form, from the scalar factor and the model-problem residues at +/- z0:
    q(x, t) ~ (-2/a) [ (dA)^2 (m1^A)12 + (dB)^2 (m1^B)12 ],  a = sqrt(640 t z0^3)
"""

import cmath
import logging
import math
from typing import List, Sequence

from .exceptions import ValidationError
from .model_rhp import arg_gamma, beta_constants, m1_entries
from .models_pydantic import AsymptoticPrediction
from .phase import theta, x_on_ray, z0_from_ray
from .scalar_rhp import ScalarRHPData, chi_endpoint, phi_integral
from .utils import wrap_angle

logger = logging.getLogger(__name__)

PATHS = ("closed-form", "exp-weighted", "modulus-normalized")
# chi(-z0) and chi(z0) come from separate quadratures
ENVELOPE_SLACK = 1e-8


def scaling_constant(t: float, z0: float) -> float:
    """a = sqrt(640 t z0^3)."""
    return math.sqrt(640.0 * t * z0**3)


def _require_reflection(sd: ScalarRHPData, r_at_minus_z0=None) -> complex:
    r = sd.r_at_minus_z0 if r_at_minus_z0 is None else complex(r_at_minus_z0)
    if r == 0:
        raise ValidationError("r(-z0) = 0: the phase is undefined and nu = 0")
    return r


def _check_ray(x: float, t: float, sd: ScalarRHPData) -> float:
    z0 = z0_from_ray(x, t)
    if not math.isclose(z0, sd.z0, rel_tol=1e-9):
        raise ValidationError(f"(x, t) = ({x:g}, {t:g}) has z0 = {z0:.12g}, but the scalar data is for z0 = {sd.z0:.12g}")
    return sd.z0


def phi(sd: ScalarRHPData, r_at_minus_z0=None) -> float:
    """5 pi/4 - arg(conj r(-z0)) - arg Gamma(-i nu) + phi_integral, reduced to (-pi, pi]."""
    r = _require_reflection(sd, r_at_minus_z0)
    raw = 1.25 * math.pi - cmath.phase(r.conjugate()) - arg_gamma(complex(0.0, -sd.nu)) + phi_integral(sd)
    return wrap_angle(raw)


def _error_scale(t: float) -> float:
    return math.log(t) / t


def leading_order_closed_form(x: float, t: float, sd: ScalarRHPData) -> AsymptoticPrediction:
    """
    Closed-form leading term at (x, t).

    Raises:
        ValidationError: x >= 0, t <= 0, a ray inconsistent with sd.z0, or r(-z0) = 0
    """
    z0 = _check_ray(x, t, sd)
    scaling = scaling_constant(t, z0)
    envelope = 2.0 * math.sqrt(sd.nu) / scaling
    argument = -128.0 * t * z0**5 + sd.nu * math.log(2560.0 * t * z0**5) + phi(sd)
    return AsymptoticPrediction(
        x=x,
        t=t,
        z0=z0,
        nu=sd.nu,
        scaling_a=scaling,
        envelope=envelope,
        cos_argument=argument,
        value=-envelope * math.cos(argument),
        error_scale=_error_scale(t),
        path="closed-form",
    )


def log_delta_A0(x: float, t: float, sd: ScalarRHPData) -> complex:
    """chi(-z0) - i t theta(-z0) + (i nu / 2) log(2560 t z0^5), imaginary part unwrapped."""
    z0 = _check_ray(x, t, sd)
    return chi_endpoint(sd, -1) - 1j * t * float(theta(-z0, z0)) + 0.5j * sd.nu * math.log(2560.0 * t * z0**5)


def log_delta_B0(x: float, t: float, sd: ScalarRHPData) -> complex:
    z0 = _check_ray(x, t, sd)
    return chi_endpoint(sd, 1) - 1j * t * float(theta(z0, z0)) - 0.5j * sd.nu * math.log(2560.0 * t * z0**5)


def delta_A0(x: float, t: float, sd: ScalarRHPData) -> complex:
    """exp(chi(-z0)) exp(-i t theta(-z0)) (2 a z0)^(i nu)."""
    return cmath.exp(log_delta_A0(x, t, sd))


def delta_B0(x: float, t: float, sd: ScalarRHPData) -> complex:
    """exp(chi(z0)) exp(-i t theta(z0)) (2 a z0)^(-i nu); conj(delta_A0) for symmetric data."""
    return cmath.exp(log_delta_B0(x, t, sd))


def leading_order_assembled(x: float, t: float, sd: ScalarRHPData, branch: str = "exp-weighted") -> AsymptoticPrediction:
    """
    (-2/a) [(dA)^2 (m1^A)12 + (dB)^2 (m1^B)12] with beta12 from the selected branch.

    ``cos_argument`` is the unwrapped phase of (dA)^2 (m1^A)12, so that
    value = -envelope cos(cos_argument) as for the closed form.

    Raises:
        ValidationError: r(-z0) = 0, or a value outside the envelope (the A and
            B contributions are not complex conjugates)
    """
    z0 = _check_ray(x, t, sd)
    r = _require_reflection(sd)
    constants = beta_constants(sd.nu, r, branch)
    m12_a, _ = m1_entries(constants)
    m12_b = m12_a.conjugate()
    scaling = scaling_constant(t, z0)

    log_a = log_delta_A0(x, t, sd)
    log_b = log_delta_B0(x, t, sd)
    total = cmath.exp(2.0 * log_a) * m12_a + cmath.exp(2.0 * log_b) * m12_b
    value = (-2.0 / scaling) * total.real

    envelope = (4.0 / scaling) * math.exp(2.0 * log_a.real) * abs(m12_a)
    if abs(value) > envelope * (1.0 + ENVELOPE_SLACK):
        raise ValidationError(
            f"Assembled value {value:.6e} exceeds its envelope {envelope:.6e}; the A and B contributions are not conjugate"
        )
    argument = 2.0 * log_a.imag + cmath.phase(m12_a)
    return AsymptoticPrediction(
        x=x,
        t=t,
        z0=z0,
        nu=sd.nu,
        scaling_a=scaling,
        envelope=envelope,
        cos_argument=argument,
        value=value,
        error_scale=_error_scale(t),
        path=branch,
    )


def predict(x: float, t: float, sd: ScalarRHPData, path: str = "closed-form") -> AsymptoticPrediction:
    if path == "closed-form":
        return leading_order_closed_form(x, t, sd)
    if path in ("exp-weighted", "modulus-normalized"):
        return leading_order_assembled(x, t, sd, path)
    raise ValidationError(f"Unknown asymptotic path '{path}'")


def predict_on_ray(z0: float, times: Sequence[float], sd: ScalarRHPData, path: str = "closed-form") -> List[AsymptoticPrediction]:
    """Predictions at x = -80 z0^4 t for each t."""
    if not math.isclose(z0, sd.z0, rel_tol=1e-12):
        raise ValidationError(f"Scalar data is for z0 = {sd.z0}, not {z0}")
    return [predict(x_on_ray(z0, t), t, sd, path) for t in times]


def envelope_ratio(nu_value: float, branch: str) -> float:
    """Assembled / closed-form envelope: 2 exp(pi nu) on the exp-weighted branch, 2 on the normalized one."""
    return 2.0 * math.exp(math.pi * nu_value) if branch == "exp-weighted" else 2.0
