"""JSON state files.

Two document shapes are accepted::

    {"dense": {"dims": [2, 2], "cut": 1,
               "entries": [[re, im], ...]}}          # row-major, dim*dim pairs

    {"classical": {"dims": [2, 2, 2], "cut": 2,
                   "probs": [[...], ...],            # dim_a x dim_b
                   "basis_a": [[amp, ...], ...],     # dim_a kets
                   "basis_b": [[amp, ...], ...]}}    # dim_b kets

An amplitude is either a real number or an ``[re, im]`` pair. Other
top-level keys are ignored, so a ``measure --json`` report (which embeds
the input under ``"dense"``) parses back to the same state.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import HiddenCorrError, StateFileError
from .states import ClassicalStateSpec, DensityMatrix, SubsystemLayout, build_classical_state


def _complex(value, where: str) -> complex:
    if isinstance(value, bool):
        raise StateFileError(f"{where}: expected a number or [re, im] pair, got {value!r}")
    if isinstance(value, (int, float)):
        z = complex(value)
    elif isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        z = complex(value[0], value[1])
    else:
        raise StateFileError(f"{where}: expected a number or [re, im] pair, got {value!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise StateFileError(f"{where}: non-finite amplitude")
    return z


def _layout(body: dict, kind: str) -> SubsystemLayout:
    for key in ("dims", "cut"):
        if key not in body:
            raise StateFileError(f"{kind}: missing required key {key!r}")
    dims, cut = body["dims"], body["cut"]
    if not isinstance(dims, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        raise StateFileError(f"{kind}.dims: expected a list of integers")
    if not isinstance(cut, int) or isinstance(cut, bool):
        raise StateFileError(f"{kind}.cut: expected an integer")
    try:
        return SubsystemLayout(tuple(dims), cut)
    except HiddenCorrError as exc:
        raise StateFileError(f"{kind}: {exc}") from exc


def _kets(rows, n: int, label: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != n:
        raise StateFileError(f"classical.{label}: expected {n} kets")
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise StateFileError(f"classical.{label}[{i}]: expected {n} amplitudes")
        for j, v in enumerate(row):
            out[i, j] = _complex(v, f"classical.{label}[{i}][{j}]")
    return out


def parse_dense(body: dict) -> DensityMatrix:
    layout = _layout(body, "dense")
    entries = body.get("entries")
    if not isinstance(entries, list):
        raise StateFileError("dense: missing required key 'entries'")
    d = layout.dim
    if len(entries) != d * d:
        raise StateFileError(f"dense.entries: expected {d * d} [re, im] pairs, got {len(entries)}")
    m = np.array([_complex(v, f"dense.entries[{i}]") for i, v in enumerate(entries)]).reshape(d, d)
    try:
        return DensityMatrix(m, layout)
    except HiddenCorrError as exc:
        raise StateFileError(f"dense: {exc}") from exc


def parse_classical(body: dict) -> ClassicalStateSpec:
    layout = _layout(body, "classical")
    for key in ("probs", "basis_a", "basis_b"):
        if key not in body:
            raise StateFileError(f"classical: missing required key {key!r}")
    probs = body["probs"]
    try:
        p = np.array(probs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError("classical.probs: expected a rectangular table of numbers") from exc
    a = _kets(body["basis_a"], layout.dim_a, "basis_a")
    b = _kets(body["basis_b"], layout.dim_b, "basis_b")
    try:
        return ClassicalStateSpec(p, a, b, layout)
    except HiddenCorrError as exc:
        raise StateFileError(f"classical: {exc}") from exc


def parse_document(doc) -> DensityMatrix | ClassicalStateSpec:
    """Parse a decoded JSON document into a state or a classical spec."""
    if not isinstance(doc, dict):
        raise StateFileError("state file must be a JSON object")
    if "classical" in doc:
        if not isinstance(doc["classical"], dict):
            raise StateFileError("classical: expected an object")
        return parse_classical(doc["classical"])
    if "dense" in doc:
        if not isinstance(doc["dense"], dict):
            raise StateFileError("dense: expected an object")
        return parse_dense(doc["dense"])
    raise StateFileError("state file needs a 'dense' or 'classical' section")


def load(path) -> DensityMatrix | ClassicalStateSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: invalid JSON ({exc})") from exc
    return parse_document(doc)


def as_density(obj: DensityMatrix | ClassicalStateSpec) -> DensityMatrix:
    return build_classical_state(obj) if isinstance(obj, ClassicalStateSpec) else obj


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def dense_section(rho: DensityMatrix) -> dict:
    return {
        "dims": list(rho.layout.factor_dims),
        "cut": rho.layout.cut,
        "entries": [_pair(z) for z in rho.matrix.ravel()],
    }


def classical_section(spec: ClassicalStateSpec) -> dict:
    return {
        "dims": list(spec.layout.factor_dims),
        "cut": spec.layout.cut,
        "probs": spec.probs.tolist(),
        "basis_a": [[_pair(z) for z in k] for k in spec.basis_a],
        "basis_b": [[_pair(z) for z in k] for k in spec.basis_b],
    }


def dump(obj: DensityMatrix | ClassicalStateSpec, path) -> None:
    if isinstance(obj, ClassicalStateSpec):
        doc = {"classical": classical_section(obj)}
    else:
        doc = {"dense": dense_section(obj)}
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")
