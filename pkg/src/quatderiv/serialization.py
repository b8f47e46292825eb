"""
JSON and CSV file formats for quaternion matrices.

JSON: ``{"rows": N, "cols": S, "data": [[a, b, c, d], ...]}`` with entries in
row-major order. CSV: a header ``i,j,a,b,c,d`` and one line per entry.
Floats are written in shortest round-trip form, so reading back is exact.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import ShapeError
from .qmatrix import QMatrix

__all__ = [
    "matrix_to_dict",
    "matrix_from_dict",
    "matrix_to_json",
    "matrix_from_json",
    "matrix_to_csv",
    "matrix_from_csv",
    "save_matrix",
    "load_matrix",
]

CSV_HEADER = ["i", "j", "a", "b", "c", "d"]


def matrix_to_dict(Q: QMatrix) -> dict:
    return {"rows": Q.rows, "cols": Q.cols,
            "data": [[float(x) for x in e] for e in Q.data.reshape(-1, 4)]}


def matrix_from_dict(obj: dict) -> QMatrix:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"matrix JSON needs rows, cols and data: {exc}") from None
    arr = np.asarray(data, dtype=float)
    if arr.shape != (rows * cols, 4):
        raise ShapeError(f"expected {rows * cols} entries of 4 components, got shape {arr.shape}")
    return QMatrix(arr.reshape(rows, cols, 4))


def matrix_to_json(Q: QMatrix) -> str:
    return json.dumps(matrix_to_dict(Q))


def matrix_from_json(text: str) -> QMatrix:
    return matrix_from_dict(json.loads(text))


def matrix_to_csv(Q: QMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for i in range(Q.rows):
        for j in range(Q.cols):
            w.writerow([i, j, *(repr(float(x)) for x in Q.data[i, j])])
    return buf.getvalue()


def matrix_from_csv(text: str) -> QMatrix:
    """Parse the CSV form; the shape is one past the largest indices."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_HEADER:
        raise ValueError(f"CSV header must be {','.join(CSV_HEADER)}")
    rows = [(int(r["i"]), int(r["j"]), [float(r[k]) for k in "abcd"]) for r in reader]
    if not rows:
        raise ShapeError("empty matrix CSV")
    n = max(r[0] for r in rows) + 1
    s = max(r[1] for r in rows) + 1
    if len(rows) != n * s:
        raise ShapeError(f"CSV has {len(rows)} entries for a {n}x{s} matrix")
    data = np.full((n, s, 4), np.nan)
    for i, j, comps in rows:
        data[i, j] = comps
    if np.isnan(data).any():
        raise ShapeError("CSV repeats or misses entries")
    return QMatrix(data)


def save_matrix(Q: QMatrix, path) -> None:
    """Write ``Q`` to ``path``; ``.csv`` selects CSV, anything else JSON."""
    path = Path(path)
    text = matrix_to_csv(Q) if path.suffix.lower() == ".csv" else matrix_to_json(Q) + "\n"
    path.write_text(text)


def load_matrix(path) -> QMatrix:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return matrix_from_csv(text)
    return matrix_from_json(text)
