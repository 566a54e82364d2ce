"""
Tests for potentials and the panel quadrature
"""

import numpy as np
import pytest

from mkdv_core.exceptions import StorageError, ValidationError
from mkdv_core.potentials import box, from_samples, gaussian, parse_descriptor, sample_periodic, sech
from mkdv_core.quadrature import graded_breakpoints, integrate, merge_breakpoints, panel_rule
from mkdv_core.storage import write_field_csv


def test_gaussian_truncation_window():
    pot = gaussian(0.3, 1.0)
    assert pot(0.0) == pytest.approx(0.3)
    assert pot.endpoint_level() <= 1.1e-14
    assert pot.left == pytest.approx(-pot.right)


def test_zero_amplitude_is_zero_potential():
    assert gaussian(0.0).is_zero()
    assert sech(0.0).is_zero()


def test_box_segments():
    pot = box(2.0, 1.5)
    assert np.array_equal(pot.segments, np.array([0.0, 1.5]))
    assert pot(0.75) == 2.0
    assert pot(2.0) == 0.0


@pytest.mark.parametrize("descriptor", ["gaussian:0.3,0", "box:1,0", "gaussian:abc", "gaussian:"])
def test_bad_descriptors(descriptor):
    with pytest.raises(ValidationError):
        parse_descriptor(descriptor)


def test_descriptor_names():
    assert parse_descriptor("gaussian:0.3,1").name == "gaussian:0.3,1"
    assert parse_descriptor(" BOX:1,1 ").name == "box:1,1"
    assert parse_descriptor("zero").is_zero()


def test_missing_csv_descriptor(tmp_path):
    with pytest.raises(StorageError):
        parse_descriptor(str(tmp_path / "nothing.csv"))


def test_from_samples_reproduces_gaussian():
    x = np.linspace(-10.0, 10.0, 401)
    pot = from_samples(x, 0.3 * np.exp(-x * x))
    assert pot(0.0) == pytest.approx(0.3, abs=1e-6)
    assert pot(1.0) == pytest.approx(0.3 * np.exp(-1.0), abs=1e-6)
    assert pot.left < -5.0 and pot.right > 5.0


def test_from_samples_all_below_threshold():
    x = np.linspace(-1.0, 1.0, 16)
    assert from_samples(x, np.zeros_like(x)).is_zero()


def test_from_samples_validation():
    with pytest.raises(ValidationError):
        from_samples(np.array([0.0, 1.0, 3.0, 4.0]), np.ones(4))
    with pytest.raises(ValidationError):
        from_samples(np.linspace(0.0, 1.0, 8), np.full(8, np.nan))
    with pytest.raises(ValidationError):
        from_samples(np.linspace(0.0, 1.0, 3), np.ones(3))


def test_csv_descriptor(tmp_path):
    x = np.linspace(-8.0, 8.0, 257)
    path = tmp_path / "q0.csv"
    write_field_csv(path, x, 0.2 * np.exp(-x * x))
    pot = parse_descriptor(str(path))
    assert pot(0.0) == pytest.approx(0.2, abs=1e-6)


def test_sample_periodic_box():
    x, q = sample_periodic("box:1,1", 64, 8.0)
    assert x[0] == -4.0
    assert x[1] - x[0] == 0.125
    assert q.sum() == 9.0


class TestQuadrature:
    """Composite Gauss-Legendre panels"""

    @pytest.mark.unit
    def test_polynomial_exactness(self):
        assert integrate(lambda x: x**5, [0.0, 1.0, 2.0]) == pytest.approx(64.0 / 6.0, rel=1e-14)

    @pytest.mark.unit
    def test_panel_rule_weights_sum_to_length(self):
        nodes, weights = panel_rule([-1.0, 0.5, 3.0], order=8)
        assert nodes.size == 16
        assert weights.sum() == pytest.approx(4.0, rel=1e-14)

    @pytest.mark.unit
    def test_graded_breakpoints_refine_toward_point(self):
        edges = graded_breakpoints(-1.0, 1.0, 0.0, 1e-3)
        assert edges[0] == -1.0 and edges[-1] == 1.0
        assert 0.0 in edges
        assert np.all(np.diff(edges) > 0)
        assert np.min(np.abs(edges[edges != 0.0])) < 2e-3

    @pytest.mark.unit
    def test_merge_breakpoints_drops_duplicates(self):
        edges = merge_breakpoints([0.5, 0.5, 2.0, -3.0], 0.0, 1.0)
        assert np.array_equal(edges, np.array([0.0, 0.5, 1.0]))
