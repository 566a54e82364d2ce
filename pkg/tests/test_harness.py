"""
Tests for the experiment harness
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from mkdv_core.evolution import WaveField
from mkdv_core.exceptions import WrapGuardError
from mkdv_core.harness import (
    IST_CANDIDATES,
    build_manifest,
    compare_on_ray,
    envelope_slope,
    initial_field,
    initial_potential,
    ist_consistency,
    ist_fit,
    measure,
    spectral_grid,
)
from mkdv_core.asymptotics import PATHS
from mkdv_core.models_pydantic import ExperimentConfig
from mkdv_core.scattering import evolve_reflection
from mkdv_core.storage import write_field_csv


class TestIstFit:
    """Evolution-law fitting between two spectra"""

    @pytest.mark.unit
    def test_identical_spectra(self, gaussian_scattering):
        fit = ist_fit(gaussian_scattering, gaussian_scattering, 0.0)
        assert fit.modulus_residual == 0.0
        assert max(fit.candidates.values()) <= 1e-14
        assert (fit.sign, fit.rate) == IST_CANDIDATES[0]

    @pytest.mark.unit
    @pytest.mark.parametrize("sign,rate", IST_CANDIDATES)
    def test_recovers_law(self, gaussian_scattering, sign, rate):
        later = evolve_reflection(gaussian_scattering, 0.3, sign=sign, rate=rate)
        fit = ist_fit(gaussian_scattering, later, 0.3)
        assert (fit.sign, fit.rate) == (sign, rate)
        assert fit.phase_residual <= 1e-12
        assert fit.modulus_residual <= 1e-15
        assert set(fit.candidates) == {"-1*16", "+1*16", "-1*32", "+1*32"}

    @pytest.mark.unit
    def test_modulus_change_detected(self, gaussian_scattering):
        shrunk = replace(gaussian_scattering, r=0.9 * gaussian_scattering.r)
        fit = ist_fit(gaussian_scattering, shrunk, 0.0)
        assert fit.modulus_residual == pytest.approx(0.1 * gaussian_scattering.reflection_sup)


class TestMeasurement:
    """Local envelope, wavenumber and phase"""

    @pytest.mark.unit
    def test_plane_wave(self):
        length, n = 16.0 * math.pi, 512
        x = -0.5 * length + (length / n) * np.arange(n)
        f = WaveField(np.cos(2.0 * x), length)
        m = measure(f, 0.3, 1.0)
        assert m.q == pytest.approx(math.cos(0.6), abs=1e-12)
        assert m.envelope == pytest.approx(1.0, abs=1e-12)
        assert m.wavenumber == pytest.approx(2.0, abs=1e-10)
        assert m.phase == pytest.approx(0.6, abs=1e-12)

    @pytest.mark.unit
    def test_zero_field(self):
        m = measure(WaveField(np.zeros(64), 10.0), 0.0, 1.0)
        assert (m.q, m.envelope, m.wavenumber, m.phase) == (0.0, 0.0, 0.0, 0.0)

    @pytest.mark.unit
    def test_envelope_slope(self):
        assert envelope_slope([1.0, 4.0, 16.0], [1.0, 0.5, 0.25]) == pytest.approx(-0.5)
        assert math.isnan(envelope_slope([1.0], [1.0]))
        assert math.isnan(envelope_slope([1.0, 2.0], [1.0, 0.0]))


class TestSetup:
    """Initial data and spectral grids from a configuration"""

    @pytest.mark.unit
    def test_builtin_potential(self, small_config):
        assert initial_potential(small_config).name == "gaussian:0.3,1"
        f0 = initial_field(small_config)
        assert f0.n == 1024
        assert f0.length == 256.0

    @pytest.mark.unit
    def test_csv_potential(self, small_config, tmp_path):
        x = np.linspace(-10.0, 10.0, 401)
        path = tmp_path / "q0.csv"
        write_field_csv(path, x, 0.3 * np.exp(-x * x))
        cfg = small_config.with_overrides(initial_data=str(path))
        pot = initial_potential(cfg)
        assert pot.name == str(path)
        assert pot(0.0) == pytest.approx(0.3, abs=1e-4)

    @pytest.mark.unit
    def test_spectral_grid(self, small_config):
        z = spectral_grid(small_config)
        assert np.array_equal(z, -z[::-1])
        skewed = spectral_grid(small_config.with_overrides(zmin=-3.0))
        assert skewed[0] == -3.0 and skewed[-1] == 2.0


class TestCompareOnRay:
    """End-to-end comparison runs on reduced grids"""

    @pytest.mark.integration
    def test_zero_datum(self, small_config):
        result = compare_on_ray(small_config.with_overrides(initial_data="zero"))
        assert result.nu == 0.0
        assert result.selected == "closed-form"
        assert [row.q_num for row in result.rows] == [0.0, 0.0]
        assert all(row.q_asym_closed == 0.0 for row in result.rows)
        assert math.isnan(result.envelope_slope)
        names = [check.name for check in result.report.checks]
        assert "degenerate_datum" in names
        assert result.report.passed

    @pytest.mark.integration
    def test_gaussian_datum(self, small_config, mocker):
        progress = mocker.Mock()
        result = compare_on_ray(small_config, progress=progress)
        assert progress.call_count == 2
        assert result.nu > 0
        assert result.selected in PATHS
        assert set(result.path_errors) == set(PATHS)
        assert [row.t for row in result.rows] == [0.5, 1.0]
        assert all(row.selected == result.selected for row in result.rows)
        assert all(math.isnan(row.error_over_scale) for row in result.rows)
        names = {check.name for check in result.report.checks}
        assert {"wrap_guard", "envelope_slope", "local_wavenumber", "envelope_ratio"} <= names
        assert not {"mass_drift", "l2_drift"} & names

    @pytest.mark.integration
    def test_drift_checked_without_layer(self, small_config):
        result = compare_on_ray(small_config.with_overrides(absorbing_fraction=0.0))
        names = {check.name for check in result.report.checks}
        assert {"mass_drift", "l2_drift"} <= names

    @pytest.mark.integration
    def test_wrap_guard_aborts_comparison(self, small_config):
        cfg = small_config.with_overrides(wrap_guard_tol=1e-30, wrap_guard_action="record")
        with pytest.raises(WrapGuardError, match="Wrap guard"):
            compare_on_ray(cfg)

    @pytest.mark.integration
    def test_fixed_branch(self, small_config):
        result = compare_on_ray(small_config.with_overrides(branch="modulus-normalized"))
        assert result.selected == "modulus-normalized"


class TestIstConsistency:
    """Scattering of evolved fields"""

    @pytest.mark.integration
    def test_initial_time_has_zero_residuals(self, small_config):
        report = ist_consistency(small_config.with_overrides(ist_times=[0.0]))
        fit = report.fits[0]
        assert fit.time == 0.0
        assert fit.modulus_residual == 0.0
        assert all(v == 0.0 for v in fit.candidates.values())
        assert not report.sign_stable
        assert report.sign is None

    @pytest.mark.integration
    @pytest.mark.slow
    def test_wide_gaussian(self, small_config):
        cfg = small_config.with_overrides(initial_data="gaussian:0.3,3")
        report = ist_consistency(cfg)
        assert len(report.fits) == 2
        assert report.sign_stable
        assert (report.sign, report.rate) == (1, 32.0)
        assert report.max_modulus_residual <= 1e-4
        assert report.passed


def test_build_manifest(small_config, small_field):
    from mkdv_core.evolution import evolve

    evo = evolve(small_field, 0.02, 0.01, checkpoints=[0.01, 0.02])
    manifest = build_manifest("evolve", small_config, evolution=evo, slope=-0.49, outputs=["a.csv"], notes=["n"])
    assert manifest.command == "evolve"
    assert len(manifest.config_hash) == 64
    assert manifest.grid["n_points"] == 1024.0
    assert manifest.dt == 0.01
    assert manifest.checkpoint_times == pytest.approx([0.01, 0.02])
    assert len(manifest.drift_log) == 3
    assert manifest.envelope_slope == -0.49
    assert "numpy" in manifest.system


def test_build_manifest_minimal():
    manifest = build_manifest("verify", slope=float("nan"))
    assert manifest.config is None
    assert manifest.envelope_slope is None


class TestAcceptanceRun:
    """Leading-order prediction against the PDE on the z0 = 0.7 ray"""

    @pytest.mark.integration
    @pytest.mark.slow
    def test_gaussian_on_ray(self):
        # default datum, domain, step and schedule on a coarser grid
        cfg = ExperimentConfig(n_points=32768)
        result = compare_on_ray(cfg)
        checks = {c.name: c for c in result.report.checks}
        assert set(checks) == {"wrap_guard", "envelope_slope", "local_wavenumber", "error_over_scale", "envelope_ratio"}
        for name, check in checks.items():
            assert check.passed, f"{name}: {check.value:.4g} (threshold {check.threshold:.4g}) {check.detail}"
        assert result.selected in PATHS
        assert [row.t for row in result.rows] == [25.0, 50.0, 100.0, 200.0]
        assert max(result.evolution.wrap_levels.values()) <= cfg.wrap_guard_tol
