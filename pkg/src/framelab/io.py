"""
File formats.

Matrices (frames and sampling operators) are JSON objects
``{"d": rows, "m": cols, "data": [row-major entries]}`` or CSV files with
one matrix row per line. Weights are a JSON list, a JSON object with a
``"weights"`` list, or a one-line CSV. Chains are JSON: a list of index
lists or ``{"chain": [...]}``; indices are 0-based.

Reports are JSON written with Python's shortest round-trip float repr,
so every number reads back bit-for-bit.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .errors import ParseError
from .frames import Frame
from .subspace import Weight


def _read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_json(text: str, path):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None


def _number(value, path, where) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{path}: expected a number, got {value!r}", where)
    value = float(value)
    if not math.isfinite(value):
        raise ParseError(f"{path}: non-finite entry", where)
    return value


def _parse_csv(text: str, path) -> np.ndarray:
    rows = []
    for r, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        vals = []
        for c, cell in enumerate(row, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"{path}: not a number: {cell.strip()!r}", f"row {r}, column {c}") from None
            if not math.isfinite(v):
                raise ParseError(f"{path}: non-finite entry", f"row {r}, column {c}")
            vals.append(v)
        if rows and len(vals) != len(rows[0]):
            raise ParseError(f"{path}: row has {len(vals)} columns, expected {len(rows[0])}", f"row {r}")
        rows.append(vals)
    if not rows:
        raise ParseError(f"{path}: empty CSV")
    return np.array(rows, dtype=float)


def matrix_from_json(obj, path="<json>") -> np.ndarray:
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected an object with keys d, m, data")
    for key in ("d", "m", "data"):
        if key not in obj:
            raise ParseError(f"{path}: missing key {key!r}")
    d, m, data = obj["d"], obj["m"], obj["data"]
    for key, v in (("d", d), ("m", m)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ParseError(f"{path}: {key} must be a nonnegative integer, got {v!r}", f"key {key!r}")
    if not isinstance(data, list):
        raise ParseError(f"{path}: data must be a list", "key 'data'")
    if len(data) != d * m:
        raise ParseError(f"{path}: data has {len(data)} entries, expected d*m = {d * m}", "key 'data'")
    vals = [_number(v, path, f"data[{i}]") for i, v in enumerate(data)]
    return np.array(vals, dtype=float).reshape(d, m)


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=float)
    return {"d": int(a.shape[0]), "m": int(a.shape[1]), "data": [float(v) for v in a.ravel()]}


def load_matrix(path) -> np.ndarray:
    text = _read_text(path)
    if text.lstrip().startswith(("{", "[")):
        return matrix_from_json(_load_json(text, path), path)
    return _parse_csv(text, path)


def load_frame(path) -> Frame:
    a = load_matrix(path)
    if a.shape[1] < 1:
        raise ParseError(f"{path}: a frame needs at least one vector")
    return Frame(a)


def save_frame(frame: Frame, path):
    write_json(matrix_to_json(frame.synthesis), path)


def load_weight(source, m: int | None = None) -> Weight:
    """``source`` is ``"I"`` for the identity (needs ``m``) or a file path."""
    if str(source) == "I":
        if m is None:
            raise ParseError("identity weight needs the coefficient count")
        return Weight.identity(m)
    text = _read_text(source)
    if text.lstrip().startswith(("{", "[")):
        obj = _load_json(text, source)
        if isinstance(obj, dict):
            if "weights" not in obj:
                raise ParseError(f"{source}: missing key 'weights'")
            obj = obj["weights"]
        if not isinstance(obj, list):
            raise ParseError(f"{source}: weights must be a list")
        vals = [_number(v, source, f"weights[{i}]") for i, v in enumerate(obj)]
    else:
        a = _parse_csv(text, source)
        if min(a.shape) != 1:
            raise ParseError(f"{source}: weight CSV must be a single row or column, got shape {a.shape}")
        vals = a.ravel().tolist()
    return Weight(np.array(vals))


def load_chain(path) -> list:
    obj = _load_json(_read_text(path), path)
    if isinstance(obj, dict):
        if "chain" not in obj:
            raise ParseError(f"{path}: missing key 'chain'")
        obj = obj["chain"]
    if not isinstance(obj, list) or not all(isinstance(s, list) for s in obj):
        raise ParseError(f"{path}: chain must be a list of index lists")
    for k, step in enumerate(obj):
        for j, v in enumerate(step):
            if isinstance(v, bool) or not isinstance(v, int):
                raise ParseError(f"{path}: index must be an integer, got {v!r}", f"chain[{k}][{j}]")
    return obj


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def to_jsonable(obj):
    """Plain JSON types; numpy values unwrapped, non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False) + "\n"


def write_json(obj, path):
    Path(path).write_text(dumps(obj), encoding="utf-8")


save_report = write_json
