"""
Pytest configuration and shared fixtures
"""

import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from mkdv_core.evolution import WaveField
from mkdv_core.models_pydantic import ExperimentConfig
from mkdv_core.potentials import box, gaussian, sample_periodic
from mkdv_core.scalar_rhp import ReflectionFunction, ScalarRHPData
from mkdv_core.scattering import scatter, symmetric_zgrid

RAY_Z0 = 0.7


@pytest.fixture(scope="session")
def test_data_dir():
    """Create a temporary directory for test data"""
    temp_dir = tempfile.mkdtemp(prefix="mkdv_test_")
    yield Path(temp_dir)
    shutil.rmtree(temp_dir, ignore_errors=True)


@pytest.fixture
def out_dir(tmp_path):
    """Fresh output directory per test"""
    path = tmp_path / "out"
    path.mkdir()
    return path


@pytest.fixture
def small_gaussian():
    """q0 = 0.3 exp(-x^2)"""
    return gaussian(0.3, 1.0)


@pytest.fixture
def unit_box():
    return box(1.0, 1.0)


@pytest.fixture(scope="session")
def gaussian_scattering():
    """Scattering data of 0.3 exp(-x^2) on a symmetric grid of 41 points in [-2, 2]"""
    return scatter(gaussian(0.3, 1.0), symmetric_zgrid(2.0, 41))


@pytest.fixture
def smooth_reflection():
    """r(s) = 0.4 exp(-s^2) exp(0.3 i s), conjugate-symmetric"""
    return ReflectionFunction.from_function(
        lambda s: 0.4 * np.exp(-s * s) * np.exp(0.3j * s), np.linspace(-4.0, 4.0, 81)
    )


@pytest.fixture
def scalar_data(smooth_reflection):
    return ScalarRHPData(smooth_reflection, RAY_Z0)


@pytest.fixture
def small_field():
    """0.3 exp(-x^2) on 256 points of a domain of length 32"""
    _, q = sample_periodic("gaussian:0.3,1", 256, 32.0)
    return WaveField(q, 32.0)


@pytest.fixture
def small_config(tmp_path):
    """Reduced experiment: short schedule, coarse grids, quick to run"""
    return ExperimentConfig(
        n_points=1024,
        length=256.0,
        dt=0.01,
        schedule=[0.5, 1.0],
        z0=0.7,
        zmin=-2.0,
        zmax=2.0,
        nz=41,
        ist_times=[0.2, 0.5],
        ist_zmax=1.0,
        ist_nz=21,
        wrap_guard_tol=1.0,
        output_dir=str(tmp_path / "runs"),
    )


@pytest.fixture
def config_file(tmp_path, small_config):
    path = tmp_path / "config.json"
    path.write_text(small_config.model_dump_json(indent=2), encoding="utf-8")
    return path


# CLI testing fixtures
@pytest.fixture
def cli_runner():
    """Typer CLI runner for testing CLI commands"""
    from typer.testing import CliRunner

    return CliRunner()


# Test markers for categorization
def pytest_configure(config):
    """Configure pytest with custom markers"""
    config.addinivalue_line("markers", "unit: Unit tests (fast, isolated)")
    config.addinivalue_line("markers", "integration: Integration tests (several modules working together)")
    config.addinivalue_line("markers", "oracle: Checks against closed forms or independent implementations")
    config.addinivalue_line("markers", "cli: CLI-related tests")
    config.addinivalue_line("markers", "slow: Slow running tests (acceptance-scale grids)")


def pytest_collection_modifyitems(config, items):
    """Automatically categorize tests based on their names"""
    for item in items:
        name = item.nodeid.lower()

        # Mark CLI-related tests
        if any(keyword in name for keyword in ["test_cli", "command"]):
            item.add_marker(pytest.mark.cli)

        # Mark oracle tests
        if any(keyword in name for keyword in ["oracle", "closed_form", "exact"]):
            item.add_marker(pytest.mark.oracle)

        # Mark slow tests
        if any(keyword in name for keyword in ["slow", "acceptance"]):
            item.add_marker(pytest.mark.slow)
