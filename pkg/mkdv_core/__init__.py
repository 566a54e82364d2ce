"""
mKdV5 Lab Core Package

Numerical laboratory for the long-time behaviour of the fifth-order modified
KdV equation: direct scattering, pseudospectral evolution, the scalar and
model Riemann-Hilbert ingredients, and the leading-order asymptotics on rays
x = -80 z0^4 t.
"""

__version__ = "1.0.0"
__author__ = "mKdV5 Lab Team"

from .models_pydantic import (
    PhaseContext,
    Tolerances,
    ExperimentConfig,
    DriftRecord,
    ModelRHPConstants,
    AsymptoticPrediction,
    ComparisonRow,
    IstFit,
    IstReport,
    CheckResult,
    VerificationReport,
    RunManifest,
)
from .exceptions import (
    MkdvLabError,
    ConfigurationError,
    ValidationError,
    ScatteringError,
    EvolutionError,
    WrapGuardError,
    QuadratureError,
    SpecialFunctionError,
    StorageError,
)
from .phase import (
    theta,
    theta_derivative,
    stationary_points,
    z0_from_ray,
    x_on_ray,
    c_alpha,
)
from .potentials import Potential, parse_descriptor, from_samples, sample_periodic
from .scattering import ScatteringData, scatter, transfer_matrix, born_approximation, evolve_reflection
from .evolution import WaveField, EvolutionResult, evolve, step, nonlinear_rhs, linear_exact_evolve, mass, l2_norm
from .scalar_rhp import ReflectionFunction, ScalarRHPData, nu, chi, delta, delta_boundary, phi_integral
from .model_rhp import log_gamma, arg_gamma, parabolic_cylinder_U, wronskian, beta_constants, m1_matrix
from .asymptotics import leading_order_closed_form, leading_order_assembled, predict, predict_on_ray
from .harness import compare_on_ray, ist_consistency, ist_fit, build_manifest
from .verification import verify
from .utils import setup_logging, get_system_info

__all__ = [
    "PhaseContext",
    "Tolerances",
    "ExperimentConfig",
    "DriftRecord",
    "ModelRHPConstants",
    "AsymptoticPrediction",
    "ComparisonRow",
    "IstFit",
    "IstReport",
    "CheckResult",
    "VerificationReport",
    "RunManifest",
    "MkdvLabError",
    "ConfigurationError",
    "ValidationError",
    "ScatteringError",
    "EvolutionError",
    "WrapGuardError",
    "QuadratureError",
    "SpecialFunctionError",
    "StorageError",
    "theta",
    "theta_derivative",
    "stationary_points",
    "z0_from_ray",
    "x_on_ray",
    "c_alpha",
    "Potential",
    "parse_descriptor",
    "from_samples",
    "sample_periodic",
    "ScatteringData",
    "scatter",
    "transfer_matrix",
    "born_approximation",
    "evolve_reflection",
    "WaveField",
    "EvolutionResult",
    "evolve",
    "step",
    "nonlinear_rhs",
    "linear_exact_evolve",
    "mass",
    "l2_norm",
    "ReflectionFunction",
    "ScalarRHPData",
    "nu",
    "chi",
    "delta",
    "delta_boundary",
    "phi_integral",
    "log_gamma",
    "arg_gamma",
    "parabolic_cylinder_U",
    "wronskian",
    "beta_constants",
    "m1_matrix",
    "leading_order_closed_form",
    "leading_order_assembled",
    "predict",
    "predict_on_ray",
    "compare_on_ray",
    "ist_consistency",
    "ist_fit",
    "build_manifest",
    "verify",
    "setup_logging",
    "get_system_info",
]
