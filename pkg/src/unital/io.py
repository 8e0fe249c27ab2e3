"""JSON wire formats for matrices and channels.

Matrix: ``{"rows": n, "cols": m, "re": [...], "im": [...]}`` (row-major).
Channel: ``{"d": n, "kraus": [matrix, ...]}``.
"""
import json
from pathlib import Path

import numpy as np


class FormatError(ValueError):
    """Malformed matrix or channel document."""


def matrix_to_json(m) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": [float(x) for x in m.real.ravel()],
        "im": [float(x) for x in m.imag.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise FormatError("matrix must be a JSON object")
    try:
        rows, cols = obj["rows"], obj["cols"]
        re = obj["re"]
        im = obj.get("im", [0.0] * len(re))
    except KeyError as exc:
        raise FormatError(f"matrix is missing field {exc}") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
        raise FormatError("rows/cols must be non-negative integers")
    if len(re) != rows * cols or len(im) != rows * cols:
        raise FormatError(
            f"entry count mismatch: expected {rows * cols}, got re={len(re)} im={len(im)}"
        )
    try:
        data = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"non-numeric matrix entries: {exc}") from None
    return data.reshape(rows, cols)


def square_matrix_from_json(obj) -> np.ndarray:
    m = matrix_from_json(obj)
    if m.shape[0] != m.shape[1]:
        raise FormatError(f"expected a square matrix, got {m.shape[0]}x{m.shape[1]}")
    return m


def channel_to_json(ch) -> dict:
    return {"d": int(ch.d), "kraus": [matrix_to_json(a) for a in ch.kraus]}


def channel_from_json(obj):
    from .channels import KrausChannel

    if not isinstance(obj, dict) or "kraus" not in obj or "d" not in obj:
        raise FormatError('channel must be an object with "d" and "kraus"')
    d = obj["d"]
    if not isinstance(d, int) or d < 1:
        raise FormatError("d must be a positive integer")
    if not isinstance(obj["kraus"], list) or not obj["kraus"]:
        raise FormatError("kraus must be a non-empty list")
    kraus = []
    for a in obj["kraus"]:
        m = square_matrix_from_json(a)
        if m.shape != (d, d):
            raise FormatError(f"Kraus operator has shape {m.shape}, expected ({d}, {d})")
        kraus.append(m)
    return KrausChannel(d=d, kraus=tuple(kraus))


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None


def dump_json(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
