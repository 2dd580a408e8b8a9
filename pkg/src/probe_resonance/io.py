"""JSON system specs in, CSV tables out.

Spec schema::

    {"type": "spectral", "energies": [...], "overlaps": [[re, im], ...]}
    {"type": "explicit", "n": k, "h_s": [[[re, im], ...], ...], "a": "hadamard" | matrix}

Overlaps and matrix entries may also be given as plain real numbers.
CSV files carry a header row and numbers with 9 significant digits; every
file is written to a temporary sibling and renamed into place.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .hamiltonian import ExplicitSpec, SpectralSpec, SystemSpec, hadamard_power
from .qcore import HermitianOperator

__all__ = ["load_spec", "spec_from_dict", "spec_to_dict", "format_number", "write_csv", "write_text_atomic"]


def _complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValidationError(f"complex entries must be [re, im] pairs, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value), 0.0)
    raise ValidationError(f"not a number: {value!r}")


def _complex_matrix(rows, dim: int, what: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != dim:
        raise ValidationError(f"{what} must be a list of {dim} rows")
    out = np.zeros((dim, dim), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ValidationError(f"{what} row {i} must have {dim} entries")
        for j, v in enumerate(row):
            out[i, j] = _complex(v)
    return out


def spec_from_dict(data: dict) -> SystemSpec:
    if not isinstance(data, dict):
        raise ValidationError("spec must be a JSON object")
    kind = data.get("type")
    if kind == "spectral":
        energies = data.get("energies")
        overlaps = data.get("overlaps")
        if not isinstance(energies, list) or not isinstance(overlaps, list):
            raise ValidationError("spectral spec needs 'energies' and 'overlaps' lists")
        return SpectralSpec([float(e) for e in energies], [_complex(d) for d in overlaps])
    if kind == "explicit":
        n = data.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValidationError("explicit spec needs a positive integer 'n'")
        dim = 2**n
        h_s = _complex_matrix(data.get("h_s"), dim, "h_s")
        a = data.get("a", "hadamard")
        if isinstance(a, str):
            if a.lower() == "hadamard":
                a_op = hadamard_power(n)
            elif a.lower() == "identity":
                a_op = np.eye(dim, dtype=np.complex128)
            else:
                raise ValidationError(f"unknown named operator {a!r}")
        else:
            a_op = _complex_matrix(a, dim, "a")
        return ExplicitSpec(HermitianOperator(h_s), a_op)
    raise ValidationError(f"spec 'type' must be 'spectral' or 'explicit', got {kind!r}")


def load_spec(path: str | Path) -> SystemSpec:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read spec file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"spec file {path} is not valid JSON: {exc}") from exc
    return spec_from_dict(data)


def _pairs(values) -> list:
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


def spec_to_dict(spec: SystemSpec) -> dict:
    if isinstance(spec, SpectralSpec):
        return {"type": "spectral", "energies": [float(e) for e in spec.energies], "overlaps": _pairs(spec.overlaps)}
    return {
        "type": "explicit",
        "n": spec.n,
        "h_s": [_pairs(row) for row in spec.h_s.entries],
        "a": [_pairs(row) for row in spec.a_op],
    }


def format_number(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".9g")


def write_text_atomic(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else format_number(v) for v in row))
    return write_text_atomic(path, "\n".join(lines) + "\n")
