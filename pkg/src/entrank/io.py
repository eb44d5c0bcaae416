"""
State and report files.

A state file is UTF-8 JSON::

    {
      "schema_version": 1,
      "dA": 2, "dB": 2,
      "matrix": [[[re, im], ...], ...],   # row-major, index (i, j) -> i*dB + j
      "metadata": {"label": ..., "seed": ..., "provenance": ...}
    }

Floats are written with ``repr`` precision, so load -> save reproduces a
file byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from .exceptions import EntrankError
from .states import BipartiteState

SCHEMA_VERSION = 1


class StateFileError(EntrankError):
    """Malformed or invalid state file; the message names the offending field."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def state_to_dict(state: BipartiteState, metadata: Optional[dict] = None) -> dict:
    rho = state.rho
    matrix = [[[float(z.real), float(z.imag)] for z in row] for row in rho]
    meta = dict(metadata or {})
    if state.label and "label" not in meta:
        meta["label"] = state.label
    return {
        "schema_version": SCHEMA_VERSION,
        "dA": state.dA,
        "dB": state.dB,
        "matrix": matrix,
        "metadata": meta,
    }


def dumps_state(state: BipartiteState, metadata: Optional[dict] = None) -> str:
    return dumps(state_to_dict(state, metadata))


def save_state(path, state: BipartiteState, metadata: Optional[dict] = None) -> None:
    Path(path).write_text(dumps_state(state, metadata), encoding="utf-8")


def _field(doc: dict, name: str, kind):
    if name not in doc:
        raise StateFileError(f"missing field '{name}'")
    value = doc[name]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise StateFileError(f"field '{name}' must be an integer, got {value!r}")
    return value


def state_from_dict(doc: Any) -> tuple[BipartiteState, dict]:
    if not isinstance(doc, dict):
        raise StateFileError("top level must be a JSON object")
    version = _field(doc, "schema_version", int)
    if version != SCHEMA_VERSION:
        raise StateFileError(f"unsupported schema_version {version}; expected {SCHEMA_VERSION}")
    dA = _field(doc, "dA", int)
    dB = _field(doc, "dB", int)
    if dA < 1 or dB < 1:
        raise StateFileError(f"fields 'dA', 'dB' must be positive, got {dA}, {dB}")
    rows = _field(doc, "matrix", list)
    n = dA * dB
    if not isinstance(rows, list) or len(rows) != n:
        raise StateFileError(f"field 'matrix' must have {n} rows")
    rho = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise StateFileError(f"matrix[{i}] must have {n} entries")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
            ):
                raise StateFileError(f"matrix[{i}][{j}] must be a [real, imag] pair of numbers")
            rho[i, j] = complex(entry[0], entry[1])
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise StateFileError("field 'metadata' must be an object")
    try:
        state = BipartiteState.from_matrix(rho, dA, dB, label=str(meta.get("label", "")))
    except EntrankError as exc:
        raise StateFileError(f"matrix is not a valid density matrix: {exc}") from None
    return state, meta


def loads_state(text: str) -> tuple[BipartiteState, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return state_from_dict(doc)


def load_state(path) -> tuple[BipartiteState, dict]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from None
    return loads_state(text)


def file_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def report_envelope(kind: str, payload: dict, input_hash: Optional[str], settings: dict) -> dict:
    return {
        "kind": kind,
        "tool": "entrank",
        "version": __version__,
        "input_sha256": input_hash,
        "settings": settings,
        "result": payload,
    }


def save_report(path, report: dict) -> None:
    Path(path).write_text(dumps(report), encoding="utf-8")
