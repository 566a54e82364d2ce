#!/usr/bin/env python3
"""
Pydantic models for the mKdV5 laboratory
Configuration, prediction records and run reports with automatic validation
"""

import json
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, ValidationError as PydanticValidationError
from pydantic import computed_field, field_validator, model_validator

from .exceptions import ConfigurationError
from .utils import is_power_of_two


class PhaseContext(BaseModel):
    """Point (x, t) of the studied region with its stationary point"""

    x: float = Field(..., lt=0, description="Position, negative in the studied region")
    t: float = Field(..., gt=0, description="Time")
    z0: float = Field(..., gt=0, description="Positive stationary point of theta")

    @model_validator(mode="after")
    def check_stationary_point(self):
        """z0 must equal (|x|/(80t))^(1/4)"""
        expected = (abs(self.x) / (80.0 * self.t)) ** 0.25
        if not math.isclose(self.z0, expected, rel_tol=1e-12):
            raise ValueError(f"z0={self.z0} does not match (|x|/80t)^(1/4)={expected}")
        return self

    @classmethod
    def from_ray(cls, x: float, t: float) -> "PhaseContext":
        from .phase import z0_from_ray

        return cls(x=x, t=t, z0=z0_from_ray(x, t))

    model_config = {
        "json_schema_extra": {"examples": [{"x": -80.0, "t": 1.0, "z0": 1.0}]}
    }


class Tolerances(BaseModel):
    """Acceptance thresholds used by the harness and the verify suites"""

    unitarity: float = Field(default=1e-8, gt=0, description="max ||a|^2-|b|^2-1|")
    symmetry: float = Field(default=1e-8, gt=0, description="max |r(z)-conj r(-z)|")
    mass_drift: float = Field(default=1e-9, gt=0, description="Relative mass drift")
    l2_drift: float = Field(default=1e-6, gt=0, description="Relative L2 drift")
    ist_modulus: float = Field(default=1e-4, gt=0, description="max ||r_t|-|r_0||")
    envelope_slope: float = Field(default=0.05, gt=0, description="Slope tolerance around -1/2")
    wavenumber: float = Field(default=0.02, gt=0, description="Relative wavenumber error")
    envelope_ratio_low: float = Field(default=0.7, gt=0)
    envelope_ratio_high: float = Field(default=1.3, gt=0)


class ExperimentConfig(BaseModel):
    """Configuration of a PDE-versus-asymptotics experiment"""

    initial_data: str = Field(default="gaussian:0.3,1", description="Initial-data descriptor or CSV path")
    n_points: int = Field(default=65536, description="Grid points, power of two")
    length: float = Field(default=9728.0, gt=0, description="Periodic domain length")
    dt: float = Field(default=5e-3, gt=0, description="Time step")
    padding: int = Field(default=3, ge=3, description="Zero-padding factor for products")
    schedule: List[float] = Field(default_factory=lambda: [25.0, 50.0, 100.0, 200.0], description="Comparison times")
    z0: float = Field(default=0.7, gt=0, description="Stationary point labelling the ray")
    zmin: float = Field(default=-4.0, description="Spectral grid lower edge")
    zmax: float = Field(default=4.0, description="Spectral grid upper edge")
    nz: int = Field(default=401, ge=3, description="Spectral grid points (odd)")
    ist_times: List[float] = Field(default_factory=lambda: [2.0, 5.0], description="IST consistency times")
    ist_zmax: float = Field(default=1.5, gt=0, description="Spectral half-width for IST checks")
    ist_nz: int = Field(default=61, ge=3, description="Spectral points for IST checks (odd)")
    branch: Literal["auto", "exp-weighted", "modulus-normalized", "closed-form"] = Field(
        default="auto", description="Asymptotic path used for abs_error"
    )
    window_wavelengths: float = Field(default=4.0, gt=0, description="Envelope window in local wavelengths")
    wrap_guard_tol: float = Field(default=1e-8, gt=0, description="Max |q| allowed in the outer 5%")
    wrap_guard_action: Literal["abort", "record"] = Field(default="record", description="Wrap-guard response")
    absorbing_fraction: float = Field(
        default=0.1, ge=0, lt=0.25, description="Absorbing layer at each end of the domain, fraction of L (ray comparisons)"
    )
    absorbing_strength: float = Field(default=100.0, gt=0, description="Peak damping rate of the absorbing layer")
    scatter_tolerance: float = Field(default=1e-8, gt=0, description="Transfer-matrix error tolerance")
    ist_scatter_tolerance: float = Field(default=1e-6, gt=0, description="Transfer-matrix tolerance for evolved, sampled fields")
    workers: int = Field(default=1, ge=1, description="Threads for spectral sweeps")
    output_dir: str = Field(default="runs/latest", description="Output directory")
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @field_validator("n_points")
    @classmethod
    def validate_power_of_two(cls, v):
        """Grid size must be a power of two"""
        if not is_power_of_two(v):
            raise ValueError(f"n_points must be a power of two, got {v}")
        return v

    @field_validator("schedule")
    @classmethod
    def validate_times(cls, v):
        """Comparison times must be positive and strictly increasing"""
        if any(t <= 0 for t in v):
            raise ValueError("times must be positive")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("times must be strictly increasing")
        return v

    @field_validator("ist_times")
    @classmethod
    def validate_ist_times(cls, v):
        """IST times may start at t = 0, where both spectra coincide"""
        if any(t < 0 for t in v):
            raise ValueError("IST times must be non-negative")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("times must be strictly increasing")
        return v

    @field_validator("nz", "ist_nz")
    @classmethod
    def validate_odd(cls, v):
        """Odd point counts keep z = 0 on symmetric grids"""
        if v % 2 == 0:
            raise ValueError("spectral point counts must be odd")
        return v

    @model_validator(mode="after")
    def check_domain(self):
        """Domain must hold the comparison schedule with a 25% margin"""
        if self.schedule:
            x_max = 80.0 * self.z0**4 * max(self.schedule)
            required = 2.0 * 1.25 * x_max
            if self.length < required:
                raise ValueError(
                    f"length {self.length} too small: need >= {required:.1f} for |x| up to {x_max:.1f}"
                )
            interior = (0.5 - self.absorbing_fraction) * self.length
            reach = x_max + 0.5 * self.window_wavelengths * math.pi / self.z0
            if interior < reach:
                raise ValueError(
                    f"absorbing layer starts at |x| = {interior:.1f}, inside the measurement window reaching {reach:.1f}"
                )
        if not (self.zmin < -self.z0 and self.zmax > self.z0):
            raise ValueError("spectral grid must contain [-z0, z0]")
        return self

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    def with_overrides(self, **updates) -> "ExperimentConfig":
        """Return a re-validated copy with the non-None updates applied"""
        data = self.model_dump()
        data.update({k: v for k, v in updates.items() if v is not None})
        try:
            return ExperimentConfig.model_validate(data)
        except PydanticValidationError as e:
            raise ConfigurationError(f"Invalid configuration override: {e}") from e

    @classmethod
    def from_json_file(cls, path: str) -> "ExperimentConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigurationError(f"Cannot read config {path}: {e}") from e
        try:
            return cls.model_validate_json(text)
        except PydanticValidationError as e:
            raise ConfigurationError(f"Invalid config {path}: {e}") from e

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "initial_data": "gaussian:0.3,1",
                    "n_points": 65536,
                    "length": 9728.0,
                    "dt": 0.005,
                    "schedule": [25, 50, 100, 200],
                    "z0": 0.7,
                }
            ]
        }
    }


class DriftRecord(BaseModel):
    """Conserved-quantity drift at a checkpoint"""

    time: float = Field(..., ge=0)
    mass: float
    l2: float = Field(..., ge=0)
    mass_drift: float = Field(..., ge=0, description="Relative mass drift")
    l2_drift: float = Field(..., ge=0, description="Relative L2 drift")
    wrap_level: float = Field(..., ge=0, description="max |q| in the outer 5% of the domain")


class ModelRHPConstants(BaseModel):
    """Constants of the parabolic-cylinder model problem"""

    nu: float = Field(..., ge=0)
    r_at_minus_z0: complex
    pc_parameter: complex = Field(..., description="a = -i nu - 1/2")
    beta12: complex
    beta21: complex
    branch: Literal["exp-weighted", "modulus-normalized"] = "exp-weighted"

    @model_validator(mode="after")
    def check_relations(self):
        if abs(self.pc_parameter - complex(-0.5, -self.nu)) > 1e-14 * max(1.0, self.nu):
            raise ValueError("pc_parameter must equal -i nu - 1/2")
        if abs(self.beta12 * self.beta21 + self.nu) > 1e-12 * max(1.0, self.nu):
            raise ValueError("beta12 * beta21 must equal -nu")
        return self


class AsymptoticPrediction(BaseModel):
    """Leading-order prediction of q(x, t)"""

    x: float
    t: float = Field(..., gt=0)
    z0: float = Field(..., gt=0)
    nu: float = Field(..., ge=0)
    scaling_a: float = Field(..., gt=0, description="sqrt(640 t z0^3)")
    envelope: float = Field(..., ge=0)
    cos_argument: float = Field(..., description="Unreduced argument of the cosine")
    value: float
    error_scale: float = Field(..., description="log(t)/t")
    path: Literal["closed-form", "exp-weighted", "modulus-normalized"] = "closed-form"

    @model_validator(mode="after")
    def check_bounded(self):
        if abs(self.value) > self.envelope * (1.0 + 1e-12) + 1e-300:
            raise ValueError("|value| exceeds the envelope")
        return self


class ComparisonRow(BaseModel):
    """Numerical solution against the asymptotic paths at one time on the ray"""

    t: float
    x: float
    q_num: float
    q_asym_closed: float
    q_asym_assembled: float
    envelope_num: float
    envelope_asym: float
    abs_error: float
    error_over_scale: float
    wavenumber_num: float
    phase_offset: float
    selected: str


class IstFit(BaseModel):
    """Evolution-law fit of the reflection coefficient at one time"""

    time: float
    modulus_residual: float
    sign: int
    rate: float
    phase_residual: float
    candidates: Dict[str, float] = Field(default_factory=dict)


class IstReport(BaseModel):
    """Isospectrality and evolution-law consistency"""

    fits: List[IstFit] = Field(default_factory=list)
    sign_stable: bool = True
    sign: Optional[int] = None
    rate: Optional[float] = None
    max_modulus_residual: float = 0.0
    passed: bool = True


class CheckResult(BaseModel):
    """Single invariant check"""

    name: str
    suite: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""


class VerificationReport(BaseModel):
    """Machine-readable result of a verify run"""

    suite: str
    checks: List[CheckResult] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


class RunManifest(BaseModel):
    """Provenance record written next to every run's outputs"""

    command: str
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    system: Dict[str, str] = Field(default_factory=dict)
    config_hash: Optional[str] = None
    config: Optional[dict] = None
    grid: Dict[str, float] = Field(default_factory=dict)
    dt: Optional[float] = None
    checkpoint_times: List[float] = Field(default_factory=list)
    drift_log: List[DriftRecord] = Field(default_factory=list)
    ist: Optional[IstReport] = None
    branch: Optional[str] = None
    envelope_slope: Optional[float] = None
    outputs: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
