import json

import numpy as np
import pytest

from mkdv_core import storage
from mkdv_core.exceptions import StorageError
from mkdv_core.models_pydantic import ComparisonRow, RunManifest


def comparison_row(t, error_over_scale=float("nan")):
    return ComparisonRow(
        t=t,
        x=-80.0 * 0.7**4 * t,
        q_num=0.01,
        q_asym_closed=0.012,
        q_asym_assembled=0.02,
        envelope_num=0.015,
        envelope_asym=0.016,
        abs_error=0.002,
        error_over_scale=error_over_scale,
        wavenumber_num=1.41,
        phase_offset=-0.3,
        selected="closed-form",
    )


def test_write_read_table(tmp_path):
    path = tmp_path / "nested" / "table.csv"
    x = np.linspace(-1.0, 1.0, 7)
    storage.write_table(path, ["a", "b"], [x, x**2])
    data = storage.read_table(path, ["a", "b"])
    assert data.shape == (7, 2)
    assert np.array_equal(data[:, 1], x**2)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "a,b"


def test_single_row_table(tmp_path):
    path = tmp_path / "one.csv"
    storage.write_table(path, ["a", "b", "c"], [[1.0], [2.0], [3.0]])
    assert storage.read_table(path, ["a", "b", "c"]).shape == (1, 3)


def test_header_mismatch(tmp_path):
    path = tmp_path / "table.csv"
    storage.write_table(path, ["a", "b"], [[1.0], [2.0]])
    with pytest.raises(StorageError, match="header"):
        storage.read_table(path, ["x", "q"])


def test_column_count_mismatch(tmp_path):
    with pytest.raises(StorageError):
        storage.write_table(tmp_path / "bad.csv", ["a", "b", "c"], [[1.0], [2.0]])


def test_missing_file(tmp_path):
    with pytest.raises(StorageError, match="not found"):
        storage.read_table(tmp_path / "missing.csv", ["x", "q"])
    with pytest.raises(StorageError):
        storage.read_comparison_csv(tmp_path / "missing.csv")
    with pytest.raises(StorageError):
        storage.read_json(tmp_path / "missing.json")


def test_field_csv_roundtrip(tmp_path):
    x = np.linspace(-3.0, 3.0, 33)
    q = 0.1 * np.exp(-x * x) + 1e-17
    storage.write_field_csv(tmp_path / "q.csv", x, q)
    xs, qs = storage.read_field_csv(tmp_path / "q.csv")
    assert np.array_equal(xs, x)
    assert np.array_equal(qs, q)


def test_checkpoint_file(tmp_path, small_field):
    later = small_field.evolved(small_field.samples, 12.5)
    path = storage.write_checkpoint(tmp_path, later)
    assert path.name == "field_t0000012.500000.csv"
    x, q = storage.read_field_csv(path)
    assert np.array_equal(q, small_field.samples)
    assert x[0] == -16.0


def test_scattering_csv(tmp_path, gaussian_scattering):
    path = tmp_path / "scattering.csv"
    storage.write_scattering_csv(path, gaussian_scattering)
    loaded = storage.read_scattering_csv(path, t=2.0)
    assert loaded.t == 2.0
    assert np.array_equal(loaded.r, gaussian_scattering.r)
    assert np.array_equal(loaded.a, gaussian_scattering.a)


def test_comparison_csv(tmp_path):
    rows = [comparison_row(25.0, 0.4), comparison_row(50.0)]
    path = tmp_path / "comparison.csv"
    storage.write_comparison_csv(path, rows)
    loaded = storage.read_comparison_csv(path)
    assert len(loaded) == 2
    assert loaded[0] == rows[0]
    assert np.isnan(loaded[1].error_over_scale)
    assert loaded[1].selected == "closed-form"


def test_comparison_csv_bad_header(tmp_path):
    path = tmp_path / "comparison.csv"
    path.write_text("t,x\n1,2\n", encoding="utf-8")
    with pytest.raises(StorageError):
        storage.read_comparison_csv(path)


def test_outputs_are_deterministic(tmp_path, gaussian_scattering):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    storage.write_scattering_csv(first, gaussian_scattering)
    storage.write_scattering_csv(second, gaussian_scattering)
    assert first.read_bytes() == second.read_bytes()


def test_model_json(tmp_path):
    manifest = RunManifest(command="verify", notes=["phase suite"])
    path = storage.write_model_json(tmp_path / "out" / "manifest.json", manifest)
    data = storage.read_json(path)
    assert data["command"] == "verify"
    assert data["notes"] == ["phase suite"]
    assert json.loads(path.read_text(encoding="utf-8")) == data


def test_delta_and_prediction_tables(tmp_path, scalar_data):
    from mkdv_core.asymptotics import predict_on_ray
    from mkdv_core.scalar_rhp import delta_table

    storage.write_delta_csv(tmp_path / "delta.csv", delta_table([1.0 + 1.0j], scalar_data))
    assert storage.read_table(tmp_path / "delta.csv", storage.DELTA_HEADER).shape == (1, 4)

    predictions = predict_on_ray(0.7, [25.0, 50.0], scalar_data)
    storage.write_predictions_csv(tmp_path / "pred.csv", predictions)
    data = storage.read_table(tmp_path / "pred.csv", storage.PREDICTION_HEADER)
    assert np.array_equal(data[:, 1], [25.0, 50.0])
