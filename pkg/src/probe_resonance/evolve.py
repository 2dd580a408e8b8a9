"""Time evolution from ``|Psi_0>`` in the full or reduced representation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .config import get_settings
from .errors import UnsupportedRepresentationError, ValidationError
from .hamiltonian import (
    ExplicitSpec,
    ProbeConfig,
    SystemSpec,
    build_full,
    build_reduced,
    full_parts,
    initial_index,
    overlaps_from_explicit,
)
from .qcore import StateVector, propagate_exact, propagate_many, propagator

__all__ = [
    "EvolutionResult",
    "TimeSeries",
    "evolve",
    "evolve_trotter",
    "evolve_series",
    "sample_probe",
    "derive_seed",
    "make_rng",
]

REPRESENTATIONS = ("full", "reduced")


@dataclass(frozen=True)
class EvolutionResult:
    state: StateVector
    success_prob: float
    probe_decay_prob: float
    leakage: float
    representation: str
    t: float


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    success_prob: np.ndarray
    probe_decay_prob: np.ndarray
    leakage: np.ndarray


def _target_levels(energies: np.ndarray, target: int) -> np.ndarray:
    if not 0 <= target < energies.shape[0]:
        raise ValidationError(f"target level {target} out of range")
    tol = get_settings().degeneracy_tol
    return np.flatnonzero(np.abs(energies - energies[target]) <= tol)


def _check_representation(spec: SystemSpec, representation: str) -> None:
    if representation not in REPRESENTATIONS:
        raise ValidationError(f"unknown representation {representation!r}")
    if representation == "full" and not isinstance(spec, ExplicitSpec):
        raise UnsupportedRepresentationError("full-space evolution needs an explicit system spec")


class _Observables:
    """Index sets for success, decay and leakage in one representation."""

    def __init__(self, spec: SystemSpec, representation: str, target: int):
        self.representation = representation
        if representation == "reduced":
            spectral = overlaps_from_explicit(spec) if isinstance(spec, ExplicitSpec) else spec
            self.dim = spectral.n_levels + 1
            self.start = 0
            self.success_rows = None
            self.success_idx = 1 + _target_levels(spectral.energies, target)
            self.decay_idx = np.arange(1, self.dim)
            self.kept_idx = np.arange(self.dim)
        else:
            n, dim_s = spec.n, spec.dim
            evals, vecs = spec.eigensystem
            self.dim = 2 ** (n + 2)
            self.start = initial_index(n)
            # |0>|1>|phi> lives in rows dim_s .. 2*dim_s of the full space
            self.success_rows = vecs[:, _target_levels(evals, target)].conj().T
            self.success_idx = None
            self.decay_idx = np.arange(self.dim // 2)
            self.kept_idx = np.r_[self.start, np.arange(dim_s, 2 * dim_s)]
            self.block = slice(dim_s, 2 * dim_s)

    def measure(self, amps: np.ndarray) -> tuple[float, float, float]:
        probs = amps.real**2 + amps.imag**2
        if self.success_idx is not None:
            success = float(np.sum(probs[self.success_idx]))
        else:
            proj = self.success_rows @ amps[self.block]
            success = float(np.sum(proj.real**2 + proj.imag**2))
        decay = float(np.sum(probs[self.decay_idx]))
        leak = 0.0 if self.representation == "reduced" else max(0.0, 1.0 - float(np.sum(probs[self.kept_idx])))
        return _clip01(success), _clip01(decay), _clip01(leak)


def _clip01(x: float) -> float:
    return min(1.0, max(0.0, x))


def _hamiltonian(spec: SystemSpec, probe: ProbeConfig, representation: str):
    if representation == "full":
        return build_full(spec, probe)
    return build_reduced(spec, probe).dense()


def evolve(
    spec: SystemSpec,
    probe: ProbeConfig,
    t: float,
    representation: str = "reduced",
    *,
    target: int = 0,
) -> EvolutionResult:
    """Evolve ``|Psi_0>`` for time ``t`` and read off the observables.

    ``success_prob`` is the population of ``|0>|1>|phi_target>`` (summed over
    a degenerate target level); ``probe_decay_prob`` the population with the
    probe in ``|0>``; ``leakage`` the full-space population outside the
    reduced basis.
    """
    _check_representation(spec, representation)
    obs = _Observables(spec, representation, target)
    h = _hamiltonian(spec, probe, representation)
    psi = propagate_exact(h, StateVector.basis(obs.dim, obs.start), float(t))
    success, decay, leak = obs.measure(psi.amps)
    return EvolutionResult(psi, success, decay, leak, representation, float(t))


def evolve_series(
    spec: SystemSpec,
    probe: ProbeConfig,
    times,
    representation: str = "reduced",
    *,
    target: int = 0,
) -> TimeSeries:
    """Observables on a time grid, sharing one eigendecomposition."""
    _check_representation(spec, representation)
    times = np.asarray(times, dtype=float).ravel()
    obs = _Observables(spec, representation, target)
    h = _hamiltonian(spec, probe, representation)
    amps = propagate_many(h, StateVector.basis(obs.dim, obs.start), times)
    out = np.array([obs.measure(row) for row in amps]).reshape(len(times), 3)
    return TimeSeries(times, out[:, 0], out[:, 1], out[:, 2])


def evolve_trotter(
    spec: SystemSpec,
    probe: ProbeConfig,
    t: float,
    m_steps: int,
    *,
    target: int = 0,
) -> EvolutionResult:
    """First-order product formula ``[exp(-i H0 t/M) exp(-i H1 t/M)]^M``.

    ``H0`` is the uncoupled probe + register part and ``H1`` the coupling;
    each factor is an exact exponential.
    """
    if not isinstance(spec, ExplicitSpec):
        raise UnsupportedRepresentationError("Trotter evolution needs an explicit system spec (B requires A)")
    m_steps = int(m_steps)
    if m_steps < 1:
        raise ValidationError("m_steps must be >= 1")
    obs = _Observables(spec, "full", target)
    h0, h1 = full_parts(spec, probe)
    dt = float(t) / m_steps
    step = propagator(h0, dt) @ propagator(h1, dt)
    psi0 = StateVector.basis(obs.dim, obs.start)
    amps = _kernels.repeated_matvec(step, psi0.amps, m_steps)
    psi = StateVector(amps)
    success, decay, leak = obs.measure(psi.amps)
    return EvolutionResult(psi, success, decay, leak, "full", float(t))


def derive_seed(seed: int, index: int) -> int:
    """Per-task stream seed: ``seed + index`` modulo 2**64."""
    return (int(seed) + int(index)) % 2**64


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) % 2**64))


def sample_probe(result: EvolutionResult | float, shots: int, seed: int) -> tuple[int, int]:
    """Simulate ``shots`` probe measurements; returns ``(count0, count1)``."""
    shots = int(shots)
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    p = result.probe_decay_prob if isinstance(result, EvolutionResult) else float(result)
    p = _clip01(p)
    count0 = int(make_rng(seed).binomial(shots, p))
    return count0, shots - count0
