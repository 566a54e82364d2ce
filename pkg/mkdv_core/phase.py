"""
phase.py - The oscillatory phase theta(z; z0) = 16 z^5 - 80 z0^4 z and its ray bounds
"""

import math
from typing import Tuple

import numpy as np

from .exceptions import ValidationError

ALPHA_MAX = math.pi / 8


def theta(z, z0: float):
    """16 z^5 - 80 z0^4 z in Horner form; accepts scalars or arrays."""
    z = np.asarray(z, dtype=complex) if np.iscomplexobj(z) else np.asarray(z, dtype=float)
    z2 = z * z
    out = z * (16.0 * z2 * z2 - 80.0 * z0**4)
    return out[()] if out.ndim == 0 else out


def theta_derivative(z, z0: float):
    z = np.asarray(z)
    z2 = z * z
    out = 80.0 * (z2 * z2 - z0**4)
    return out[()] if out.ndim == 0 else out


def theta_expansion(z, z0: float):
    """Exact expansion of theta about z0: -64 z0^5 + 160 z0^5 u^2 (1 + u + u^2/2 + u^3/10), u = (z - z0)/z0."""
    w = np.asarray(z) - z0
    u = w / z0
    out = -64.0 * z0**5 + 160.0 * z0**5 * u * u * (1.0 + u * (1.0 + u * (0.5 + 0.1 * u)))
    return out[()] if out.ndim == 0 else out


def stationary_points(z0: float) -> Tuple[float, float]:
    if z0 <= 0:
        raise ValidationError(f"z0 must be positive, got {z0}")
    return (-z0, z0)


def z0_from_ray(x: float, t: float) -> float:
    """Stationary point (|x| / (80 t))^(1/4) for x < 0, t > 0."""
    if t <= 0:
        raise ValidationError(f"t must be positive, got {t}")
    if x >= 0:
        raise ValidationError(f"x must be negative in the oscillation region, got {x}")
    return (abs(x) / (80.0 * t)) ** 0.25


def x_on_ray(z0: float, t: float) -> float:
    """Inverse of z0_from_ray: x = -80 z0^4 t."""
    return -80.0 * z0**4 * t


def ray_point(u, alpha: float, z0: float):
    """z(u) = z0 + u z0 exp(i (pi - alpha))."""
    return z0 + np.asarray(u) * z0 * np.exp(1j * (math.pi - alpha))


def re_i_theta_on_ray(u, alpha: float, z0: float):
    """
    Exact Re(i theta) along the ray z(u):
    16 z0^5 u^2 (10 sin 2a - 10 u sin 3a + 5 u^2 sin 4a - u^3 sin 5a).
    """
    u = np.asarray(u, dtype=float)
    s2, s3, s4, s5 = (math.sin(k * alpha) for k in (2, 3, 4, 5))
    out = 16.0 * z0**5 * u * u * (10.0 * s2 + u * (-10.0 * s3 + u * (5.0 * s4 - u * s5)))
    return out[()] if out.ndim == 0 else out


def c_alpha(alpha: float) -> float:
    """
    Lower-bound constant c(alpha) of Re(i theta) >= 16 c(alpha) z0^5 u^2 on u in [0, 1/cos alpha].

    Raises:
        ValidationError: if alpha is outside (0, pi/8]
    """
    if not (0.0 < alpha <= ALPHA_MAX * (1.0 + 1e-15)):
        raise ValidationError(f"alpha must lie in (0, pi/8], got {alpha}")
    c = math.cos(alpha)
    return (
        10.0 * math.sin(2 * alpha)
        - 10.0 * math.sin(3 * alpha) / c
        + 5.0 * math.sin(4 * alpha) / c**2
        - math.sin(5 * alpha) / c**3
    )


def ray_bound_violations(alpha: float, z0: float, n: int = 1000) -> int:
    """Count grid points of u in [0, 1/cos alpha] where the c(alpha) lower bound fails."""
    u = np.linspace(0.0, 1.0 / math.cos(alpha), n)
    lhs = re_i_theta_on_ray(u, alpha, z0)
    rhs = 16.0 * c_alpha(alpha) * z0**5 * u * u
    slack = 1e-12 * (1.0 + np.abs(rhs))
    return int(np.count_nonzero(lhs < rhs - slack))
