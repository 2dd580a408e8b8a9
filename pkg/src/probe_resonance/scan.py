"""Frequency scan of the probe decay probability and peak picking.

The probe frequency runs over ``omega_k = omega_ini + k * (omega_fin - omega_ini) / q``
for ``k = 0..q``. A level ``E_i`` shows up as a peak near
``omega = E_i - epsilon0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._parallel import pmap
from .errors import ValidationError
from .evolve import _check_representation, derive_seed, evolve, sample_probe
from .hamiltonian import ExplicitSpec, ProbeConfig, SystemSpec
from .io import write_csv

__all__ = ["ScanConfig", "ScanPoint", "Peak", "ScanResult", "default_scan_time", "run_scan", "detect_peaks"]


@dataclass(frozen=True)
class ScanConfig:
    omega_ini: float
    omega_fin: float
    q: int
    t_evolve: float | None = None
    shots: int = 0
    seed: int = 0
    representation: str = "reduced"
    threshold: float | None = None
    min_separation: int = 2

    def __post_init__(self):
        if not self.omega_fin > self.omega_ini:
            raise ValidationError("omega_fin must exceed omega_ini")
        if self.omega_ini <= 0:
            raise ValidationError("probe frequencies must be positive (omega_ini > 0)")
        if int(self.q) < 1:
            raise ValidationError("q must be >= 1")
        if int(self.shots) < 0:
            raise ValidationError("shots must be >= 0")
        if int(self.min_separation) < 1:
            raise ValidationError("min_separation must be >= 1")
        if self.t_evolve is not None and self.t_evolve < 0:
            raise ValidationError("t_evolve must be >= 0")

    @property
    def delta_omega(self) -> float:
        return (self.omega_fin - self.omega_ini) / self.q

    def grid(self) -> np.ndarray:
        return self.omega_ini + np.arange(self.q + 1) * self.delta_omega


@dataclass(frozen=True)
class ScanPoint:
    omega: float
    decay_prob: float
    count0: int
    shots: int


@dataclass(frozen=True)
class Peak:
    omega_peak: float
    height: float
    width_estimate: float
    index: int


@dataclass(frozen=True)
class ScanResult:
    points: tuple[ScanPoint, ...]
    peaks: tuple[Peak, ...]
    epsilon0: float
    t_evolve: float
    spectrum_estimates: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        est = sorted(self.epsilon0 + p.omega_peak for p in self.peaks)
        object.__setattr__(self, "spectrum_estimates", tuple(est))

    @property
    def omegas(self) -> np.ndarray:
        return np.array([p.omega for p in self.points])

    @property
    def decay(self) -> np.ndarray:
        return np.array([p.decay_prob for p in self.points])

    def write(self, out_dir: str | Path) -> tuple[Path, Path]:
        out_dir = Path(out_dir)
        scan_csv = write_csv(
            out_dir / "scan.csv",
            ["omega", "decay_prob", "count0", "shots"],
            [(p.omega, p.decay_prob, p.count0, p.shots) for p in self.points],
        )
        peaks_csv = write_csv(
            out_dir / "peaks.csv",
            ["omega_peak", "height", "energy_estimate"],
            [(p.omega_peak, p.height, self.epsilon0 + p.omega_peak) for p in sorted(self.peaks, key=lambda p: p.omega_peak)],
        )
        return scan_csv, peaks_csv


def _n_levels(spec: SystemSpec) -> int:
    return spec.dim if isinstance(spec, ExplicitSpec) else spec.n_levels


def default_scan_time(spec: SystemSpec, c: float) -> float:
    """``pi / (2 c d_typ)`` with ``d_typ = 1/sqrt(N)``."""
    if c <= 0:
        raise ValidationError("default scan time needs c > 0; pass t_evolve explicitly")
    return math.pi * math.sqrt(_n_levels(spec)) / (2.0 * c)


def run_scan(spec: SystemSpec, probe_template: ProbeConfig, cfg: ScanConfig, *, threads: int = 1) -> ScanResult:
    _check_representation(spec, cfg.representation)
    t = default_scan_time(spec, probe_template.c) if cfg.t_evolve is None else float(cfg.t_evolve)
    grid = cfg.grid()
    shots = int(cfg.shots)

    def one(k: int) -> ScanPoint:
        probe = probe_template.with_omega(float(grid[k]))
        p = evolve(spec, probe, t, cfg.representation).probe_decay_prob
        if shots == 0:
            return ScanPoint(float(grid[k]), p, 0, 0)
        count0, _ = sample_probe(p, shots, derive_seed(cfg.seed, k))
        return ScanPoint(float(grid[k]), count0 / shots, count0, shots)

    points = tuple(pmap(one, range(len(grid)), threads))
    peaks = detect_peaks(points, cfg.threshold, cfg.min_separation)
    return ScanResult(points, tuple(peaks), probe_template.epsilon0, t)


def _as_arrays(points) -> tuple[np.ndarray, np.ndarray]:
    if len(points) == 0:
        raise ValidationError("no scan points")
    if isinstance(points[0], ScanPoint):
        return np.array([p.omega for p in points]), np.array([p.decay_prob for p in points])
    arr = np.asarray(points, dtype=float)
    return arr[:, 0], arr[:, 1]


def _half_width(omega: np.ndarray, p: np.ndarray, k: int) -> float:
    half = 0.5 * p[k]
    left = omega[0]
    for i in range(k, 0, -1):
        if p[i - 1] < half:
            left = omega[i - 1] + (half - p[i - 1]) / (p[i] - p[i - 1]) * (omega[i] - omega[i - 1])
            break
    right = omega[-1]
    for i in range(k, len(p) - 1):
        if p[i + 1] < half:
            right = omega[i] + (p[i] - half) / (p[i] - p[i + 1]) * (omega[i + 1] - omega[i])
            break
    return float(right - left)


def detect_peaks(points, threshold: float | None = None, min_separation: int = 2) -> list[Peak]:
    """Grid points above ``threshold`` that are local maxima over ``±min_separation`` cells.

    Default threshold is half the largest decay probability. Among equal
    values inside a window the lowest frequency wins.
    """
    omega, p = _as_arrays(points)
    if threshold is None:
        threshold = 0.5 * float(p.max())
    sep = int(min_separation)
    peaks = []
    for k in range(len(p)):
        if not p[k] > threshold:
            continue
        left = p[max(0, k - sep) : k]
        right = p[k + 1 : k + 1 + sep]
        if np.all(p[k] > left) and np.all(p[k] >= right):
            peaks.append(Peak(float(omega[k]), float(p[k]), _half_width(omega, p, k), k))
    return peaks
