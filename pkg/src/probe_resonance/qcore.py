"""Dense complex linear algebra: states, Hermitian operators, propagators.

Everything here is immutable. Arrays held by :class:`StateVector` and
:class:`HermitianOperator` are copied on construction and marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .config import get_settings
from .errors import SizeError, ValidationError

__all__ = [
    "StateVector",
    "HermitianOperator",
    "IDENTITY2",
    "SIGMA_X",
    "SIGMA_Z",
    "HADAMARD",
    "tensor",
    "eig_hermitian",
    "propagator",
    "propagate_exact",
    "propagate_many",
    "expectation",
    "fix_phases",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitude vector."""

    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.ndim != 1 or amps.size == 0:
            raise ValidationError("state amplitudes must be a non-empty 1-D array")
        if not np.all(np.isfinite(amps)):
            raise ValidationError("state amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > get_settings().norm_tol:
            raise ValidationError(f"state is not normalized (norm = {norm!r})")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def basis(cls, dim: int, index: int) -> StateVector:
        if not 0 <= index < dim:
            raise ValidationError(f"basis index {index} out of range for dim {dim}")
        v = np.zeros(dim, dtype=np.complex128)
        v[index] = 1.0
        return cls(v)

    @classmethod
    def normalized(cls, amps) -> StateVector:
        amps = np.asarray(amps, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise ValidationError("cannot normalize the zero vector")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def probabilities(self) -> np.ndarray:
        return self.amps.real**2 + self.amps.imag**2

    def inner(self, other: StateVector) -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amps, other.amps))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense Hermitian matrix; rejected (never symmetrized) if not Hermitian."""

    entries: np.ndarray

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValidationError(f"operator must be a square matrix, got shape {m.shape}")
        if m.shape[0] > get_settings().max_dim:
            raise SizeError(f"operator dimension {m.shape[0]} exceeds max_dim {get_settings().max_dim}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("operator entries must be finite")
        dev = float(np.max(np.abs(m - m.conj().T)))
        if dev > get_settings().herm_tol:
            raise ValidationError(f"operator is not Hermitian (max deviation {dev:.3e})")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __add__(self, other: HermitianOperator) -> HermitianOperator:
        return HermitianOperator(self.entries + other.entries)

    def scaled(self, factor: float) -> HermitianOperator:
        return HermitianOperator(float(factor) * self.entries)

    def apply(self, psi: StateVector) -> np.ndarray:
        _check_dims(self, psi)
        return self.entries @ psi.amps


IDENTITY2 = HermitianOperator(np.eye(2))
SIGMA_X = HermitianOperator(np.array([[0, 1], [1, 0]]))
SIGMA_Z = HermitianOperator(np.array([[1, 0], [0, -1]]))
HADAMARD = HermitianOperator(np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def _as_operator(h) -> HermitianOperator:
    return h if isinstance(h, HermitianOperator) else HermitianOperator(np.asarray(h))


def _check_dims(h: HermitianOperator, psi: StateVector) -> None:
    if h.dim != psi.dim:
        raise ValidationError(f"dimension mismatch: operator {h.dim}, state {psi.dim}")


def tensor(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    a, b = _as_operator(a), _as_operator(b)
    dim = a.dim * b.dim
    if dim > get_settings().max_dim:
        raise SizeError(f"tensor product dimension {dim} exceeds max_dim {get_settings().max_dim}")
    return HermitianOperator(np.kron(a.entries, b.entries))


def fix_phases(vecs: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Rotate each column so its first component above ``tol`` is real positive."""
    vecs = np.array(vecs, dtype=np.complex128, copy=True)
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        idx = np.flatnonzero(np.abs(col) > tol)
        if idx.size:
            lead = col[idx[0]]
            vecs[:, k] = col * (abs(lead) / lead)
    return vecs


def eig_hermitian(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvector matrix of ``h``.

    Columns follow the phase convention of :func:`fix_phases` so that repeated
    runs give identical vectors.
    """
    h = _as_operator(h)
    evals, vecs = np.linalg.eigh(h.entries)
    return evals, fix_phases(vecs)


def propagator(h, t: float) -> np.ndarray:
    """Matrix ``exp(-i h t)``."""
    evals, vecs = eig_hermitian(h)
    return (vecs * np.exp(-1j * evals * t)) @ vecs.conj().T


def propagate_exact(h, psi: StateVector, t: float) -> StateVector:
    h = _as_operator(h)
    _check_dims(h, psi)
    if t == 0:
        return psi
    evals, vecs = eig_hermitian(h)
    coeffs = vecs.conj().T @ psi.amps
    return StateVector(vecs @ (np.exp(-1j * evals * t) * coeffs))


def propagate_many(h, psi: StateVector, times, components=None) -> np.ndarray:
    """Amplitudes of ``exp(-i h t) psi`` for every ``t`` in ``times``.

    Returns an array of shape ``(len(times), len(components))``; all
    components when ``components`` is None.
    """
    h = _as_operator(h)
    _check_dims(h, psi)
    evals, vecs = eig_hermitian(h)
    coeffs = vecs.conj().T @ psi.amps
    rows = vecs if components is None else vecs[np.asarray(components)]
    weights = rows * coeffs[None, :]
    return _kernels.spectral_amplitudes(evals, weights, np.asarray(times, dtype=float))


def expectation(h, psi: StateVector) -> float:
    h = _as_operator(h)
    return float(np.vdot(psi.amps, h.apply(psi)).real)
