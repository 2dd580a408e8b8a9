"""Numerical tolerances and size limits shared by every module.

The defaults can be overridden from a JSON file (``--config`` on the CLI)
or programmatically with :func:`configure`.
"""

from __future__ import annotations

import dataclasses
import json
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError


@dataclass(frozen=True)
class Settings:
    herm_tol: float = 1e-12
    unitary_tol: float = 1e-10
    norm_tol: float = 1e-10
    max_dim: int = 2**14
    # eigenvalues closer than this are treated as one degenerate level
    degeneracy_tol: float = 1e-9


_current = Settings()


def get_settings() -> Settings:
    return _current


def configure(**overrides) -> Settings:
    global _current
    known = {f.name for f in dataclasses.fields(Settings)}
    unknown = set(overrides) - known
    if unknown:
        raise ValidationError(f"unknown settings: {sorted(unknown)}")
    _current = dataclasses.replace(_current, **overrides)
    return _current


def load_config_file(path: str | Path) -> Settings:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError("config file must hold a JSON object")
    return configure(**data)


@contextmanager
def settings_override(**overrides):
    global _current
    saved = _current
    try:
        configure(**overrides)
        yield _current
    finally:
        _current = saved
