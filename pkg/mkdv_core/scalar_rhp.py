"""
scalar_rhp.py - The scalar factor delta(z), the function chi(z) and the exponent nu

    delta(z) = exp( (1/2 pi i) int_{-z0}^{z0} log(1 - |r(s)|^2) / (s - z) ds )
    chi(z)   = (1/2 pi i) int_{-z0}^{z0} [log(1 - |r(s)|^2) - log(1 - |r(-z0)|^2)] / (s - z) ds
    log delta(z) = chi(z) + i nu log((z - z0) / (z + z0))

Cauchy integrals use composite Gauss-Legendre panels with singularity
subtraction at the nearest point of the cut and geometric grading toward it.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .exceptions import QuadratureError, ValidationError
from .quadrature import DEFAULT_ORDER, graded_breakpoints, merge_breakpoints, panel_rule

logger = logging.getLogger(__name__)

CUT_DISTANCE = 1e-12
SYMMETRY_TOLERANCE = 1e-6


@dataclass(frozen=True)
class ReflectionFunction:
    """
    Reflection coefficient r(z) on the real line.

    Built from grid samples (piecewise cubic interpolant whose knots feed
    the quadrature breakpoints) or from an exact callable.
    """

    zgrid: np.ndarray
    values: np.ndarray
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    knots: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False, compare=False)

    def __post_init__(self):
        if self.zgrid.size and np.max(np.abs(self.values)) >= 1.0:
            raise ValidationError(f"Reflection sup |r| = {float(np.max(np.abs(self.values))):.6f} must be < 1")

    def __call__(self, s):
        return self.evaluator(np.asarray(s, dtype=float))

    @property
    def eta(self) -> float:
        """sup |r| over the grid."""
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def log_one_minus_modulus(self, s) -> np.ndarray:
        """log(1 - |r(s)|^2)."""
        r = self(s)
        return np.log1p(-(r.real**2 + r.imag**2))

    @classmethod
    def from_samples(cls, zgrid, r) -> "ReflectionFunction":
        z = np.asarray(zgrid, dtype=float)
        values = np.asarray(r, dtype=complex)
        if z.ndim != 1 or z.shape != values.shape or z.size < 4:
            raise ValidationError("Reflection samples need matching 1-D arrays of at least 4 points")
        if np.any(np.diff(z) <= 0):
            raise ValidationError("Reflection grid must be strictly increasing")
        spline = CubicSpline(z, values)
        return cls(z, values, spline, z)

    @classmethod
    def from_scattering(cls, sd) -> "ReflectionFunction":
        return cls.from_samples(sd.zgrid, sd.r)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], zgrid) -> "ReflectionFunction":
        z = np.asarray(zgrid, dtype=float)
        vec = lambda s: np.asarray(func(s), dtype=complex) * np.ones_like(s, dtype=complex)
        return cls(z, vec(z), vec)

    @classmethod
    def zero(cls, zmax: float = 4.0) -> "ReflectionFunction":
        z = np.linspace(-zmax, zmax, 5)
        return cls(z, np.zeros(z.size, dtype=complex), lambda s: np.zeros_like(s, dtype=complex))


def nu(r: ReflectionFunction, z0: float) -> float:
    """nu = -(2 pi)^{-1} log(1 - |r(-z0)|^2)."""
    value = complex(r(-z0))
    mod2 = abs(value) ** 2
    if mod2 >= 1.0:
        raise ValidationError(f"|r(-z0)| = {math.sqrt(mod2):.6f} must be < 1")
    return -math.log1p(-mod2) / (2.0 * math.pi)


class ScalarRHPData:
    """Reflection, stationary point and the derived exponent nu for one ray."""

    def __init__(self, reflection: ReflectionFunction, z0: float, order: int = DEFAULT_ORDER):
        if z0 <= 0:
            raise ValidationError(f"z0 must be positive, got {z0}")
        self.reflection = reflection
        self.z0 = float(z0)
        self.order = order
        self._check_modulus_symmetry()
        self.nu = nu(reflection, z0)
        self.log_at_endpoint = float(reflection.log_one_minus_modulus(np.array([-z0]))[0])
        inner = reflection.knots[np.abs(reflection.knots) < z0]
        self._knots = np.asarray(inner, dtype=float)
        logger.debug("Scalar RHP data at z0 = %g: nu = %.6g", self.z0, self.nu)

    def _check_modulus_symmetry(self):
        s = np.linspace(0.0, self.z0, 33)
        lhs = np.abs(self.reflection(s))
        rhs = np.abs(self.reflection(-s))
        gap = float(np.max(np.abs(lhs - rhs)))
        if gap > SYMMETRY_TOLERANCE:
            raise ValidationError(
                f"Reflection modulus is not even on [-z0, z0] (max gap {gap:.2e}); "
                "a single nu is undefined for such data"
            )

    @property
    def r_at_minus_z0(self) -> complex:
        return complex(self.reflection(np.array([-self.z0]))[0])

    @property
    def r_at_z0(self) -> complex:
        return complex(self.reflection(np.array([self.z0]))[0])

    def f(self, s) -> np.ndarray:
        """Subtracted numerator log(1 - |r(s)|^2) - log(1 - |r(-z0)|^2)."""
        return self.reflection.log_one_minus_modulus(s) - self.log_at_endpoint

    def breakpoints(self, point: Optional[float] = None, finest: float = 1e-3) -> np.ndarray:
        """Panel edges on [-z0, z0]: spline knots, mild grading at both ends, and grading toward ``point``."""
        z0 = self.z0
        edges = [self._knots]
        edges.append(graded_breakpoints(-z0, z0, -z0, 1e-3 * z0))
        edges.append(graded_breakpoints(-z0, z0, z0, 1e-3 * z0))
        if point is not None:
            edges.append(graded_breakpoints(-z0, z0, point, finest))
        return merge_breakpoints(np.concatenate(edges), -z0, z0)

    def rule(self, point: Optional[float] = None, finest: float = 1e-3, order: Optional[int] = None):
        return panel_rule(self.breakpoints(point, finest), order or self.order)


def _distance_to_cut(z: complex, z0: float) -> float:
    if abs(z.real) <= z0:
        return abs(z.imag)
    return abs(z - math.copysign(z0, z.real))


def _log_ratio(z: complex, z0: float) -> complex:
    """Principal log((z - z0)/(z + z0)); analytic off [-z0, z0]."""
    return complex(np.log((z - z0) / (z + z0)))


def _check_off_cut(z: complex, z0: float) -> float:
    dist = _distance_to_cut(z, z0)
    if dist < CUT_DISTANCE:
        raise QuadratureError(f"z = {z} lies within {CUT_DISTANCE:g} of the cut [-{z0:g}, {z0:g}]; use delta_boundary")
    return dist


def chi(z, sd: ScalarRHPData, order: Optional[int] = None) -> complex:
    """
    chi(z) for z off the closed cut.

    Raises:
        QuadratureError: z within 1e-12 of [-z0, z0]
    """
    z = complex(z)
    z0 = sd.z0
    dist = _check_off_cut(z, z0)
    p = min(max(z.real, -z0), z0)
    nodes, weights = sd.rule(p, finest=max(dist / 4.0, 1e-14), order=order)
    fp = float(sd.f(np.array([p]))[0])
    smooth = np.sum((sd.f(nodes) - fp) / (nodes - z) * weights)
    total = smooth + fp * _log_ratio(z, z0)
    return complex(total / (2j * math.pi))


def chi_endpoint(sd: ScalarRHPData, endpoint: int = -1, order: Optional[int] = None) -> complex:
    """Continuous limit of chi at endpoint * z0 (the subtracted numerator vanishes there)."""
    if endpoint not in (-1, 1):
        raise ValidationError(f"endpoint must be +1 or -1, got {endpoint}")
    e = endpoint * sd.z0
    nodes, weights = sd.rule(order=order)
    fe = float(sd.f(np.array([e]))[0])
    return complex(np.sum((sd.f(nodes) - fe) / (nodes - e) * weights) / (2j * math.pi))


def log_delta(z, sd: ScalarRHPData, order: Optional[int] = None) -> complex:
    """chi(z) + i nu log((z - z0)/(z + z0))."""
    z = complex(z)
    return chi(z, sd, order) + 1j * sd.nu * _log_ratio(z, sd.z0)


def delta(z, sd: ScalarRHPData, order: Optional[int] = None) -> complex:
    """delta(z) off the closed cut; delta(infinity) = 1."""
    return complex(np.exp(log_delta(z, sd, order)))


def log_delta_direct(z, sd: ScalarRHPData, order: Optional[int] = None) -> complex:
    """(1/2 pi i) int log(1 - |r|^2)/(s - z) ds without the chi decomposition."""
    z = complex(z)
    z0 = sd.z0
    dist = _check_off_cut(z, z0)
    p = min(max(z.real, -z0), z0)
    nodes, weights = sd.rule(p, finest=max(dist / 4.0, 1e-14), order=order)
    F = sd.reflection.log_one_minus_modulus(nodes)
    return complex(np.sum(F / (nodes - z) * weights) / (2j * math.pi))


def delta_boundary(s: float, side: str, sd: ScalarRHPData, order: Optional[int] = None) -> complex:
    """
    Boundary value delta_+(s) (from Im z > 0) or delta_-(s) on the cut.

    log delta_(+/-)(s) = +/- F(s)/2 + PV int F(sigma)/(sigma - s) dsigma / (2 pi i), F = log(1 - |r|^2),
    with the principal value taken by subtracting F(s). Off the closed cut both
    sides coincide with delta(s).

    Raises:
        QuadratureError: s at (or within 1e-12 of) an endpoint
    """
    if side not in ("+", "-"):
        raise ValidationError(f"side must be '+' or '-', got {side!r}")
    s = float(s)
    z0 = sd.z0
    if abs(abs(s) - z0) < CUT_DISTANCE:
        raise QuadratureError(f"delta_boundary is singular at the endpoint s = {s:g}")
    if abs(s) > z0:
        return delta(s, sd, order)
    nodes, weights = panel_rule(merge_breakpoints(np.concatenate([sd.breakpoints(), [s]]), -z0, z0), order or sd.order)
    Fs = float(sd.reflection.log_one_minus_modulus(np.array([s]))[0])
    F = sd.reflection.log_one_minus_modulus(nodes)
    pv = np.sum((F - Fs) / (nodes - s) * weights) + Fs * math.log((z0 - s) / (z0 + s))
    sign = 1.0 if side == "+" else -1.0
    return complex(np.exp(sign * 0.5 * Fs + pv / (2j * math.pi)))


def phi_integral(sd: ScalarRHPData, order: Optional[int] = None) -> float:
    """(1/pi) int_{-z0}^{z0} log[(1 - |r(s)|^2)/(1 - |r(-z0)|^2)] ds / (s + z0)."""
    nodes, weights = sd.rule(order=order)
    return float(np.sum(sd.f(nodes) / (nodes + sd.z0) * weights) / math.pi)


def reflection_limits(sd: ScalarRHPData) -> Dict[str, complex]:
    """One-sided limits of the lens reflection at +/- z0."""
    rp = sd.r_at_z0
    rm = sd.r_at_minus_z0
    return {
        "z0+": rp.conjugate(),
        "z0-": -rp.conjugate() / (1.0 - abs(rp) ** 2),
        "-z0+": rm / (1.0 - abs(rm) ** 2),
        "-z0-": -rm,
    }


def delta_table(points: Sequence[complex], sd: ScalarRHPData) -> np.ndarray:
    """Rows (z_re, z_im, delta_re, delta_im) for the delta table CSV."""
    rows = []
    for z in points:
        d = delta(z, sd)
        rows.append((complex(z).real, complex(z).imag, d.real, d.imag))
    return np.array(rows, dtype=float).reshape(-1, 4)
