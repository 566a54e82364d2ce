"""
model_rhp.py - Parabolic-cylinder solution of the local model problem

Special functions (complex log-Gamma, U(a, z)), the Wronskian identity
W{U(a, z), U(a, -z)} = sqrt(2 pi) / Gamma(1/2 + a) and the constants
beta12, beta21 that carry the amplitude and phase of the leading term.
"""

import cmath
import logging
import math
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .exceptions import SpecialFunctionError, ValidationError
from .models_pydantic import ModelRHPConstants

logger = logging.getLogger(__name__)

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

SEED_RADIUS = 25.0
MAX_ABS_Z = 30.0
MAX_ABS_IM_A = 10.0
WRONSKIAN_POINTS = (1.0, 2.0, 4.0)
WRONSKIAN_SPREAD = 1e-6


def _lanczos(w: complex) -> complex:
    """log Gamma(w) for Re w >= 1/2."""
    w -= 1.0
    acc = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (w + i)
    t = w + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (w + 0.5) * cmath.log(t) - t + cmath.log(acc)


def log_gamma(w) -> complex:
    """
    Principal log-Gamma of a complex argument.

    Lanczos approximation for Re w >= 1/2, one recurrence step for
    -1/2 <= Re w < 1/2 and the reflection formula below that.

    Raises:
        SpecialFunctionError: w at a pole (non-positive integer)
    """
    w = complex(w)
    if w.imag == 0.0 and w.real <= 0.0 and w.real == math.floor(w.real):
        raise SpecialFunctionError(f"Gamma has a pole at w = {w.real:g}")
    if w.real >= 0.5:
        return _lanczos(w)
    if w.real >= -0.5:
        return _lanczos(w + 1.0) - cmath.log(w)
    return cmath.log(math.pi) - cmath.log(cmath.sin(math.pi * w)) - log_gamma(1.0 - w)


def gamma(w) -> complex:
    return cmath.exp(log_gamma(w))


def arg_gamma(w) -> float:
    """arg Gamma(w) in (-pi, pi]."""
    return cmath.phase(gamma(w))


def _asymptotic_series(a: complex, z: complex) -> Tuple[complex, complex]:
    """
    Truncated large-|z| series of U(a, z): returns (log U, U'/U).

    Terms (-1)^s (1/2 + a)_{2s} / (s! (2 z^2)^s) are summed until they stop
    decreasing.
    """
    term = 1.0 + 0.0j
    total = term
    dtotal = 0.0j
    inv = 1.0 / (2.0 * z * z)
    prev = abs(term)
    for s in range(1, 30):
        term = -term * (a + 2 * s - 1.5) * (a + 2 * s - 0.5) / s * inv
        if abs(term) > prev or abs(term) < 1e-17 * abs(total):
            break
        total += term
        dtotal += -2 * s * term / z
        prev = abs(term)
    log_u = -0.25 * z * z - (a + 0.5) * cmath.log(z) + cmath.log(total)
    ratio = -0.5 * z - (a + 0.5) / z + dtotal / total
    return log_u, ratio


def _seed_point(z: complex) -> complex:
    radius = max(SEED_RADIUS, abs(z) + 10.0)
    if abs(z) > 0 and abs(cmath.phase(z)) <= math.pi / 4:
        return radius * z / abs(z)
    return complex(radius, 0.0)


def _check_envelope(a: complex, z: complex):
    if abs(a.imag) > MAX_ABS_IM_A or abs(z) > MAX_ABS_Z:
        raise SpecialFunctionError(
            f"U(a, z) is supported for |Im a| <= {MAX_ABS_IM_A:g} and |z| <= {MAX_ABS_Z:g}; got a = {a}, z = {z}"
        )


def _integrate(a: complex, z_start: complex, z_points: np.ndarray):
    """
    Integrate g'' = (z^2/4 + a) g along the straight path from the seed toward z_points.

    ``z_points`` must be collinear with the seed and ordered along the path.
    Returns (U, U') at z_points, scaled to the recessive normalization.
    """
    log_seed, ratio = _asymptotic_series(a, z_start)
    direction = z_points[-1] - z_start
    taus = np.real((z_points - z_start) / direction) if direction != 0 else np.zeros(z_points.size)

    def rhs(tau, y):
        zz = z_start + tau * direction
        return np.array([y[1] * direction, (0.25 * zz * zz + a) * y[0] * direction])

    sol = solve_ivp(
        rhs,
        (0.0, 1.0),
        np.array([1.0 + 0.0j, ratio]),
        method="DOP853",
        t_eval=np.clip(taus, 0.0, 1.0),
        rtol=1e-12,
        atol=1e-300,
    )
    if not sol.success:
        raise SpecialFunctionError(f"Parabolic cylinder integration failed: {sol.message}")
    scale = cmath.exp(log_seed)
    return sol.y[0] * scale, sol.y[1] * scale


def parabolic_cylinder_U(a, z, derivative: bool = False):
    """
    Recessive solution U(a, z) of g'' = (z^2/4 + a) g, normalized by
    U ~ exp(-z^2/4) z^(-a-1/2) in |arg z| < 3 pi / 4.

    Args:
        a: Complex parameter, |Im a| <= 10
        z: Complex argument, |z| <= 30
        derivative: Also return U'(a, z)

    Returns:
        U, or (U, U') when ``derivative`` is set

    Raises:
        SpecialFunctionError: outside the supported envelope
    """
    a = complex(a)
    z = complex(z)
    _check_envelope(a, z)
    seed = _seed_point(z)
    u, du = _integrate(a, seed, np.array([z]))
    if derivative:
        return complex(u[0]), complex(du[0])
    return complex(u[0])


def pcf_on_segment(a, z_start, z_end, n: int = 201) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """U and U' sampled at n points of the segment [z_start, z_end] from one integration."""
    a = complex(a)
    z_start, z_end = complex(z_start), complex(z_end)
    _check_envelope(a, z_start)
    _check_envelope(a, z_end)
    u0, du0 = parabolic_cylinder_U(a, z_start, derivative=True)
    points = z_start + (z_end - z_start) * np.linspace(0.0, 1.0, n)
    direction = z_end - z_start

    def rhs(tau, y):
        zz = z_start + tau * direction
        return np.array([y[1] * direction, (0.25 * zz * zz + a) * y[0] * direction])

    sol = solve_ivp(
        rhs,
        (0.0, 1.0),
        np.array([u0, du0]),
        method="DOP853",
        t_eval=np.linspace(0.0, 1.0, n),
        rtol=1e-12,
        atol=1e-14 * max(1.0, abs(u0)),
    )
    if not sol.success:
        raise SpecialFunctionError(f"Parabolic cylinder integration failed: {sol.message}")
    return points, sol.y[0], sol.y[1]


def wronskian_samples(a, points: Sequence[float] = WRONSKIAN_POINTS) -> np.ndarray:
    """W{U(a, z), U(a, -z)} = -U(z) U'(-z) - U'(z) U(-z) at each sample point."""
    values = []
    for z in points:
        up, dup = parabolic_cylinder_U(a, z, derivative=True)
        um, dum = parabolic_cylinder_U(a, -z, derivative=True)
        values.append(-up * dum - dup * um)
    return np.array(values, dtype=complex)


def wronskian_exact(a) -> complex:
    """sqrt(2 pi) / Gamma(1/2 + a)."""
    return math.sqrt(2.0 * math.pi) * cmath.exp(-log_gamma(0.5 + complex(a)))


def wronskian(a, points: Sequence[float] = WRONSKIAN_POINTS) -> complex:
    """
    Numerical Wronskian of U(a, z) and U(a, -z), averaged over ``points``.

    Raises:
        SpecialFunctionError: 1/2 + a at a Gamma pole, or relative spread above 1e-6
    """
    a = complex(a)
    half = 0.5 + a
    if half.imag == 0.0 and half.real <= 0.0 and half.real == math.floor(half.real):
        raise SpecialFunctionError(f"1/2 + a = {half.real:g} is a Gamma pole; the Wronskian vanishes")
    values = wronskian_samples(a, points)
    mean = complex(np.mean(values))
    spread = float(np.max(np.abs(values - mean)) / abs(mean))
    if spread > WRONSKIAN_SPREAD:
        raise SpecialFunctionError(f"Wronskian not constant: relative spread {spread:.2e}")
    return mean


def wronskian_report(a, points: Sequence[float] = WRONSKIAN_POINTS) -> Dict[str, float]:
    """Numerical value, closed form, relative error and spread for one parameter."""
    values = wronskian_samples(a, points)
    mean = complex(np.mean(values))
    exact = wronskian_exact(a)
    return {
        "numerical": mean,
        "exact": exact,
        "relative_error": abs(mean - exact) / abs(exact),
        "spread": float(np.max(np.abs(values - mean)) / abs(mean)),
    }


def cylinder_parameter(nu_value: float) -> complex:
    """a = -i nu - 1/2."""
    return complex(-0.5, -nu_value)


def beta_constants(nu_value: float, r_at_minus_z0: complex, branch: str = "exp-weighted") -> ModelRHPConstants:
    """
    beta12 = exp(+/- pi nu / 2) sqrt(2 pi) exp(3 pi i / 4) / (-conj(r(-z0)) Gamma(-i nu)),
    beta21 = -nu / beta12.

    ``branch="exp-weighted"`` uses exp(+pi nu / 2), giving |beta12|^2 = nu exp(2 pi nu);
    ``branch="modulus-normalized"`` uses exp(-pi nu / 2), giving |beta12|^2 = nu.

    Raises:
        ValidationError: r(-z0) = 0, or nu inconsistent with |r(-z0)|
    """
    if branch not in ("exp-weighted", "modulus-normalized"):
        raise ValidationError(f"Unknown beta branch '{branch}'")
    r = complex(r_at_minus_z0)
    if r == 0:
        raise ValidationError("beta constants need r(-z0) != 0")
    if abs(r) >= 1.0:
        raise ValidationError(f"|r(-z0)| = {abs(r):.6f} must be < 1")
    expected = -math.log1p(-abs(r) ** 2) / (2.0 * math.pi)
    if abs(nu_value - expected) > 1e-10 * max(1.0, expected):
        raise ValidationError(f"nu = {nu_value:.12g} inconsistent with |r(-z0)| (expected {expected:.12g})")
    sign = 1.0 if branch == "exp-weighted" else -1.0
    log_b12 = (
        sign * 0.5 * math.pi * nu_value
        + 0.5 * math.log(2.0 * math.pi)
        + 0.75j * math.pi
        - cmath.log(-r.conjugate())
        - log_gamma(complex(0.0, -nu_value))
    )
    beta12 = cmath.exp(log_b12)
    beta21 = -nu_value / beta12
    return ModelRHPConstants(
        nu=nu_value,
        r_at_minus_z0=r,
        pc_parameter=cylinder_parameter(nu_value),
        beta12=beta12,
        beta21=beta21,
        branch=branch,
    )


def m1_entries(constants: ModelRHPConstants) -> Tuple[complex, complex]:
    """((m1)12, (m1)21) = (-i beta12, i beta21) at -z0."""
    return -1j * constants.beta12, 1j * constants.beta21


def m1_matrix(constants: ModelRHPConstants) -> np.ndarray:
    m12, m21 = m1_entries(constants)
    return np.array([[0.0, m12], [m21, 0.0]], dtype=complex)


def m1_b_from_a(m1_a: np.ndarray) -> np.ndarray:
    """Residue matrix at +z0 from the one at -z0: -sigma3 conj(m1) sigma3."""
    sigma3 = np.diag([1.0, -1.0])
    return -sigma3 @ np.conj(np.asarray(m1_a, dtype=complex)) @ sigma3
