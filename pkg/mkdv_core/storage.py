"""
storage.py - CSV tables, checkpoint files and JSON run manifests
"""

import json
import os
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel

from .exceptions import StorageError

FIELD_HEADER = ["x", "q"]
SCATTERING_HEADER = ["z", "re_a", "im_a", "re_b", "im_b", "re_r", "im_r"]
DELTA_HEADER = ["z_re", "z_im", "delta_re", "delta_im"]
PREDICTION_HEADER = ["x", "t", "z0", "nu", "envelope", "cos_arg", "value", "error_scale"]
COMPARISON_HEADER = [
    "t",
    "x",
    "q_num",
    "q_asym_closed",
    "q_asym_assembled",
    "envelope_num",
    "envelope_asym",
    "abs_error",
    "error_over_scale",
    "wavenumber_num",
    "phase_offset",
    "selected",
]

PathLike = Union[str, os.PathLike]


def write_table(path: PathLike, header: Sequence[str], columns: Sequence[np.ndarray]):
    """Write numeric columns as CSV with a plain header line and %.17g values."""
    try:
        data = np.column_stack([np.asarray(c, dtype=float) for c in columns]) if columns else np.empty((0, len(header)))
        if data.shape[1] != len(header):
            raise ValueError(f"{data.shape[1]} columns for a {len(header)}-column header")
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, data, delimiter=",", header=",".join(header), comments="", fmt="%.17g")
    except Exception as e:
        raise StorageError(f"Failed to write {path}: {str(e)}") from e


def read_table(path: PathLike, header: Sequence[str]) -> np.ndarray:
    """Read a CSV written by write_table; returns an (n, len(header)) float array."""
    if not os.path.exists(path):
        raise StorageError(f"File not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline().strip()
        names = [h.strip() for h in first.split(",")]
        if names != list(header):
            raise ValueError(f"header {names} does not match expected {list(header)}")
        data = np.genfromtxt(path, delimiter=",", skip_header=1, dtype=float)
    except Exception as e:
        raise StorageError(f"Failed to read {path}: {str(e)}") from e
    return np.atleast_2d(data).reshape(-1, len(header))


def write_field_csv(path: PathLike, x: np.ndarray, q: np.ndarray):
    write_table(path, FIELD_HEADER, [x, q])


def read_field_csv(path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
    data = read_table(path, FIELD_HEADER)
    return data[:, 0], data[:, 1]


def checkpoint_name(t: float) -> str:
    return f"field_t{t:014.6f}.csv"


def write_checkpoint(directory: PathLike, field) -> Path:
    """Write a WaveField snapshot as field_t<time>.csv under ``directory``."""
    path = Path(directory) / checkpoint_name(field.t)
    write_field_csv(path, field.x, field.samples)
    return path


def write_scattering_csv(path: PathLike, sd):
    write_table(
        path,
        SCATTERING_HEADER,
        [sd.zgrid, sd.a.real, sd.a.imag, sd.b.real, sd.b.imag, sd.r.real, sd.r.imag],
    )


def read_scattering_csv(path: PathLike, t: float = 0.0):
    from .scattering import ScatteringData

    data = read_table(path, SCATTERING_HEADER)
    return ScatteringData(
        zgrid=data[:, 0],
        a=data[:, 1] + 1j * data[:, 2],
        b=data[:, 3] + 1j * data[:, 4],
        r=data[:, 5] + 1j * data[:, 6],
        t=t,
    )


def write_delta_csv(path: PathLike, rows: np.ndarray):
    rows = np.asarray(rows, dtype=float).reshape(-1, 4)
    write_table(path, DELTA_HEADER, [rows[:, i] for i in range(4)])


def write_predictions_csv(path: PathLike, predictions: List):
    cols = [
        [getattr(p, name) for p in predictions]
        for name in ("x", "t", "z0", "nu", "envelope", "cos_argument", "value", "error_scale")
    ]
    write_table(path, PREDICTION_HEADER, cols)


def write_comparison_csv(path: PathLike, rows: List):
    """Comparison table; the last column holds the selected path label."""
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(COMPARISON_HEADER) + "\n")
            for row in rows:
                values = [f"{float(getattr(row, name)):.17g}" for name in COMPARISON_HEADER[:-1]]
                fh.write(",".join(values + [row.selected]) + "\n")
    except Exception as e:
        raise StorageError(f"Failed to write {path}: {str(e)}") from e


def read_comparison_csv(path: PathLike) -> List:
    from .models_pydantic import ComparisonRow

    if not os.path.exists(path):
        raise StorageError(f"File not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [line.strip() for line in fh if line.strip()]
        if lines[0].split(",") != COMPARISON_HEADER:
            raise ValueError("unexpected comparison header")
        rows = []
        for line in lines[1:]:
            parts = line.split(",")
            rows.append(ComparisonRow(**dict(zip(COMPARISON_HEADER, parts))))
        return rows
    except Exception as e:
        raise StorageError(f"Failed to read {path}: {str(e)}") from e


def write_model_json(path: PathLike, model: BaseModel) -> Path:
    """Write a pydantic model (manifest, report) as indented JSON."""
    try:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(model.model_dump_json(indent=2), encoding="utf-8")
        return path
    except Exception as e:
        raise StorageError(f"Failed to write {path}: {str(e)}") from e


def read_json(path: PathLike) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except Exception as e:
        raise StorageError(f"Failed to read {path}: {str(e)}") from e
