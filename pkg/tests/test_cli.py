"""
Tests for the Typer command line
"""

import json

import pytest

from cli.typer_cli import app
from mkdv_core.exceptions import ScatteringError, WrapGuardError
from mkdv_core.models_pydantic import IstFit, IstReport

pytestmark = pytest.mark.cli

GOOD_WRONSKIAN = {"numerical": 1.0, "exact": 1.0, "relative_error": 1e-10, "spread": 1e-12}


class TestVerifyCommands:
    """verify and verify-model"""

    def test_verify_phase_suite(self, cli_runner, out_dir):
        result = cli_runner.invoke(app, ["verify", "--suite", "phase", "--out", str(out_dir)])
        assert result.exit_code == 0, result.output
        report = json.loads((out_dir / "verify.json").read_text(encoding="utf-8"))
        assert report["suite"] == "phase"
        assert report["passed"] is True

    def test_verify_unknown_suite(self, cli_runner):
        result = cli_runner.invoke(app, ["verify", "--suite", "nonsense"])
        assert result.exit_code == 2
        assert "Unknown suite" in result.output

    def test_verify_failure_exit_code(self, cli_runner, mocker):
        from mkdv_core.models_pydantic import CheckResult, VerificationReport

        failing = VerificationReport(
            suite="phase", checks=[CheckResult(name="x", suite="phase", passed=False, value=1.0, threshold=0.0)]
        )
        mocker.patch("cli.typer_cli.run_verify", return_value=failing)
        result = cli_runner.invoke(app, ["verify", "--suite", "phase"])
        assert result.exit_code == 1

    def test_log_level_option(self, cli_runner):
        result = cli_runner.invoke(app, ["--log-level", "DEBUG", "verify", "-s", "phase"])
        assert result.exit_code == 0, result.output

    def test_verify_model_passes(self, cli_runner, mocker):
        report = mocker.patch("cli.typer_cli.wronskian_report", return_value=GOOD_WRONSKIAN)
        result = cli_runner.invoke(app, ["verify-model", "--nu", "0.5", "--nu", "1.0"])
        assert result.exit_code == 0, result.output
        assert report.call_count == 2

    def test_verify_model_detects_mismatch(self, cli_runner, mocker):
        mocker.patch("cli.typer_cli.wronskian_report", return_value={**GOOD_WRONSKIAN, "relative_error": 1e-3})
        result = cli_runner.invoke(app, ["verify-model", "--nu", "0.5"])
        assert result.exit_code == 1

    def test_verify_model_rejects_zero_nu(self, cli_runner, mocker):
        mocker.patch("cli.typer_cli.wronskian_report", return_value=GOOD_WRONSKIAN)
        result = cli_runner.invoke(app, ["verify-model", "--nu", "0"])
        assert result.exit_code == 2


class TestConfiguration:
    """Config loading and overrides"""

    def test_invalid_config_file(self, cli_runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"nz": 4}', encoding="utf-8")
        result = cli_runner.invoke(app, ["scatter", "--config", str(bad)])
        assert result.exit_code == 2

    def test_missing_config_file(self, cli_runner, tmp_path):
        result = cli_runner.invoke(app, ["scatter", "--config", str(tmp_path / "none.json")])
        assert result.exit_code == 2

    def test_invalid_override(self, cli_runner, config_file, out_dir):
        result = cli_runner.invoke(app, ["scatter", "-c", str(config_file), "-o", str(out_dir), "--nz", "40"])
        assert result.exit_code == 2


class TestScatterCommand:
    def test_scatter_writes_outputs(self, cli_runner, config_file, out_dir):
        result = cli_runner.invoke(app, ["scatter", "-c", str(config_file), "-o", str(out_dir)])
        assert result.exit_code == 0, result.output
        assert (out_dir / "scattering.csv").exists()
        manifest = json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["command"] == "scatter"
        assert manifest["outputs"] == ["scattering.csv"]
        assert len(manifest["config_hash"]) == 64

    def test_scatter_failure(self, cli_runner, config_file, out_dir, mocker):
        mocker.patch("cli.typer_cli.run_scatter", side_effect=ScatteringError("solver diverged"))
        result = cli_runner.invoke(app, ["scatter", "-c", str(config_file), "-o", str(out_dir)])
        assert result.exit_code == 1
        assert "solver diverged" in result.output

    def test_bad_descriptor(self, cli_runner, config_file, out_dir):
        result = cli_runner.invoke(app, ["scatter", "-c", str(config_file), "-o", str(out_dir), "--data", "gaussian:abc"])
        assert result.exit_code == 2


class TestEvolveCommand:
    def test_evolve_writes_final_field(self, cli_runner, config_file, out_dir):
        result = cli_runner.invoke(app, ["evolve", "-c", str(config_file), "-o", str(out_dir), "-t", "0.05", "--dt", "0.001"])
        assert result.exit_code == 0, result.output
        assert (out_dir / "field_t0000000.050000.csv").exists()
        manifest = json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))
        assert len(manifest["drift_log"]) == 2

    def test_evolve_wrap_guard_abort(self, cli_runner, config_file, out_dir, mocker):
        mocker.patch("cli.typer_cli.run_evolution", side_effect=WrapGuardError("wrap guard tripped"))
        result = cli_runner.invoke(app, ["evolve", "-c", str(config_file), "-o", str(out_dir)])
        assert result.exit_code == 1
        assert "wrap guard tripped" in result.output


class TestAsymptoteCommand:
    def test_predictions_written(self, cli_runner, config_file, out_dir):
        result = cli_runner.invoke(
            app, ["asymptote", "-c", str(config_file), "-o", str(out_dir), "-t", "25", "-t", "50", "-p", "exp-weighted"]
        )
        assert result.exit_code == 0, result.output
        lines = (out_dir / "predictions.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "x,t,z0,nu,envelope,cos_arg,value,error_scale"
        assert len(lines) == 3
        assert (out_dir / "delta.csv").exists()

    def test_predictions_from_reflection_file(self, cli_runner, config_file, out_dir):
        assert cli_runner.invoke(app, ["scatter", "-c", str(config_file), "-o", str(out_dir)]).exit_code == 0
        result = cli_runner.invoke(
            app,
            ["asymptote", "-c", str(config_file), "-o", str(out_dir), "-r", str(out_dir / "scattering.csv"), "-t", "100"],
        )
        assert result.exit_code == 0, result.output

    def test_unknown_path(self, cli_runner, config_file, out_dir):
        result = cli_runner.invoke(app, ["asymptote", "-c", str(config_file), "-o", str(out_dir), "-p", "nope"])
        assert result.exit_code == 2


class TestIstCommand:
    def test_stable_law(self, cli_runner, config_file, out_dir, mocker):
        fit = IstFit(time=0.5, modulus_residual=1e-7, sign=1, rate=32.0, phase_residual=1e-6)
        mocker.patch("cli.typer_cli.ist_consistency", return_value=IstReport(fits=[fit], sign=1, rate=32.0))
        result = cli_runner.invoke(app, ["ist-check", "-c", str(config_file), "-o", str(out_dir)])
        assert result.exit_code == 0, result.output
        assert json.loads((out_dir / "ist.json").read_text(encoding="utf-8"))["rate"] == 32.0

    def test_failed_law(self, cli_runner, config_file, out_dir, mocker):
        mocker.patch("cli.typer_cli.ist_consistency", return_value=IstReport(sign_stable=False, passed=False))
        result = cli_runner.invoke(app, ["ist-check", "-c", str(config_file), "-o", str(out_dir)])
        assert result.exit_code == 1


class TestCompareCommand:
    @pytest.mark.integration
    def test_compare_writes_outputs(self, cli_runner, config_file, out_dir):
        result = cli_runner.invoke(app, ["compare", "-c", str(config_file), "-o", str(out_dir), "--skip-ist"])
        assert result.exit_code in (0, 1), result.output
        assert (out_dir / "comparison.csv").exists()
        report = json.loads((out_dir / "acceptance.json").read_text(encoding="utf-8"))
        assert report["suite"] == "acceptance"
        manifest = json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["branch"] in ("closed-form", "exp-weighted", "modulus-normalized")
        assert manifest["ist"] is None

    def test_compare_fails_when_ist_fails(self, cli_runner, config_file, out_dir, mocker):
        mocker.patch("cli.typer_cli.ist_consistency", side_effect=ScatteringError("undecayed"))
        result = cli_runner.invoke(app, ["compare", "-c", str(config_file), "-o", str(out_dir)])
        assert result.exit_code == 1
