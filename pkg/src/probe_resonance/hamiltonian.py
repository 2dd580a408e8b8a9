"""Probe + register Hamiltonians, full space and reduced (arrowhead) form.

Qubit order in the full space is probe (most significant), ancilla, then the
``n`` system qubits, so a basis index is ``probe * 2**(n+1) + ancilla * 2**n + x``.
The initial state ``|1>|0>|0...0>`` therefore sits at index ``2**(n+1)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np

from .config import get_settings
from .errors import SizeError, ValidationError, StrongCouplingWarning
from .qcore import HADAMARD, HermitianOperator, eig_hermitian

__all__ = [
    "ProbeConfig",
    "ExplicitSpec",
    "SpectralSpec",
    "SystemSpec",
    "ArrowheadHamiltonian",
    "hadamard_power",
    "build_full",
    "full_parts",
    "build_reduced",
    "overlaps_from_explicit",
    "build_degenerate",
    "initial_index",
    "reduced_basis",
]


@dataclass(frozen=True)
class ProbeConfig:
    omega: float
    epsilon0: float
    c: float

    def __post_init__(self):
        for name in ("omega", "epsilon0", "c"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValidationError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.omega <= 0:
            raise ValidationError("omega must be > 0")
        if self.c < 0:
            raise ValidationError("c must be >= 0")
        if self.c > 0.1 * self.omega:
            warnings.warn(
                f"coupling c={self.c} is not small compared to omega={self.omega}",
                StrongCouplingWarning,
                stacklevel=3,
            )

    @property
    def weak_coupling(self) -> bool:
        return self.c <= 0.1 * self.omega

    def with_omega(self, omega: float) -> ProbeConfig:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", StrongCouplingWarning)
            return ProbeConfig(omega=omega, epsilon0=self.epsilon0, c=self.c)


def hadamard_power(n: int) -> np.ndarray:
    a = np.ones((1, 1))
    for _ in range(n):
        a = np.kron(a, HADAMARD.entries.real)
    return a.astype(np.complex128)


@dataclass(frozen=True, eq=False)
class ExplicitSpec:
    """System given by ``H_S`` and the state-preparation unitary ``A``."""

    h_s: HermitianOperator
    a_op: np.ndarray = field(default=None)

    def __post_init__(self):
        h = self.h_s if isinstance(self.h_s, HermitianOperator) else HermitianOperator(self.h_s)
        dim = h.dim
        n = int(round(np.log2(dim)))
        if 2**n != dim:
            raise ValidationError(f"H_S dimension {dim} is not a power of two")
        a = hadamard_power(n) if self.a_op is None else np.array(self.a_op, dtype=np.complex128)
        if a.shape != (dim, dim):
            raise ValidationError(f"A has shape {a.shape}, expected {(dim, dim)}")
        dev = float(np.max(np.abs(a.conj().T @ a - np.eye(dim))))
        if dev > get_settings().unitary_tol:
            raise ValidationError(f"A is not unitary (max deviation {dev:.3e})")
        a.setflags(write=False)
        object.__setattr__(self, "h_s", h)
        object.__setattr__(self, "a_op", a)

    @property
    def n(self) -> int:
        return int(round(np.log2(self.h_s.dim)))

    @property
    def dim(self) -> int:
        return self.h_s.dim

    @cached_property
    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        return eig_hermitian(self.h_s)


@dataclass(frozen=True, eq=False)
class SpectralSpec:
    """System given by its levels ``E_i`` and overlaps ``d_i = <phi_i|A|0>``.

    Level 0 is the target level by convention; overlaps_from_explicit lists
    levels in ascending order so the target is the ground state.
    """

    energies: np.ndarray
    overlaps: np.ndarray

    def __post_init__(self):
        e = np.array(self.energies, dtype=float).ravel()
        d = np.array(self.overlaps, dtype=np.complex128).ravel()
        if e.size == 0 or e.shape != d.shape:
            raise ValidationError("energies and overlaps must be non-empty and of equal length")
        if not (np.all(np.isfinite(e)) and np.all(np.isfinite(d))):
            raise ValidationError("energies and overlaps must be finite")
        total = float(np.sum(np.abs(d) ** 2))
        if abs(total - 1.0) > get_settings().norm_tol:
            raise ValidationError(f"overlaps must satisfy sum |d_i|^2 = 1 (got {total!r})")
        e.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "overlaps", d)

    @property
    def n_levels(self) -> int:
        return self.energies.shape[0]


SystemSpec = Union[ExplicitSpec, SpectralSpec]


@dataclass(frozen=True, eq=False)
class ArrowheadHamiltonian:
    """Hub ``|Psi_0>`` coupled to ``N`` mutually uncoupled spokes ``|Psi_i>``.

    ``couplings[i]`` is the matrix element ``<Psi_i|H|Psi_0>``.
    """

    hub_energy: float
    spoke_energies: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        s = np.array(self.spoke_energies, dtype=float).ravel()
        z = np.array(self.couplings, dtype=np.complex128).ravel()
        if s.shape != z.shape:
            raise ValidationError("spoke_energies and couplings must have equal length")
        s.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "hub_energy", float(self.hub_energy))
        object.__setattr__(self, "spoke_energies", s)
        object.__setattr__(self, "couplings", z)

    @property
    def n_spokes(self) -> int:
        return self.spoke_energies.shape[0]

    def dense(self) -> HermitianOperator:
        n = self.n_spokes
        m = np.zeros((n + 1, n + 1), dtype=np.complex128)
        m[0, 0] = self.hub_energy
        m[np.arange(1, n + 1), np.arange(1, n + 1)] = self.spoke_energies
        m[1:, 0] = self.couplings
        m[0, 1:] = self.couplings.conj()
        return HermitianOperator(m)

    def collapse(self, tol: float | None = None) -> tuple[ArrowheadHamiltonian, list[np.ndarray]]:
        """Merge spokes of equal energy into their coupled symmetric combination.

        Within a group of degenerate spokes only the combination
        ``sum_i z_i |Psi_i> / |z|`` couples to the hub, so the group is
        replaced by one spoke with coupling ``|z|`` (phase of the first
        non-zero member kept). Returns the collapsed model and, per new spoke,
        the indices of the original spokes it replaces.
        """
        tol = get_settings().degeneracy_tol if tol is None else tol
        order = np.argsort(self.spoke_energies, kind="stable")
        groups: list[list[int]] = []
        for i in order:
            if groups and abs(self.spoke_energies[i] - self.spoke_energies[groups[-1][0]]) <= tol:
                groups[-1].append(int(i))
            else:
                groups.append([int(i)])
        # keep original ordering of first members
        groups.sort(key=lambda g: min(g))
        energies, couplings = [], []
        for g in groups:
            z = self.couplings[g]
            mag = float(np.sqrt(np.sum(np.abs(z) ** 2)))
            nz = np.flatnonzero(np.abs(z) > 0)
            phase = z[nz[0]] / abs(z[nz[0]]) if nz.size else 1.0
            energies.append(float(np.mean(self.spoke_energies[g])))
            couplings.append(mag * phase)
        return (
            ArrowheadHamiltonian(self.hub_energy, np.array(energies), np.array(couplings)),
            [np.array(g) for g in groups],
        )


def _check_full_dim(n: int) -> int:
    dim = 2 ** (n + 2)
    if dim > get_settings().max_dim:
        raise SizeError(f"full-space dimension {dim} exceeds max_dim {get_settings().max_dim}")
    return dim


def _coupling_b(a: np.ndarray) -> np.ndarray:
    # |1><0| (x) A + |0><1| (x) A^dagger; equals sigma_x (x) A for Hermitian A
    dim = a.shape[0]
    b = np.zeros((2 * dim, 2 * dim), dtype=np.complex128)
    b[dim:, :dim] = a
    b[:dim, dim:] = a.conj().T
    return b


def full_parts(spec: ExplicitSpec, probe: ProbeConfig) -> tuple[HermitianOperator, HermitianOperator]:
    """Split ``H`` into the uncoupled part and the probe-register coupling."""
    if not isinstance(spec, ExplicitSpec):
        raise ValidationError("the full-space Hamiltonian needs an explicit system spec")
    n, dim_s = spec.n, spec.dim
    dim = _check_full_dim(n)
    half = dim // 2

    h_r = np.zeros((2 * dim_s, 2 * dim_s), dtype=np.complex128)
    h_r[0, 0] = probe.epsilon0
    h_r[dim_s:, dim_s:] = spec.h_s.entries

    h0 = np.zeros((dim, dim), dtype=np.complex128)
    # -(omega/2) sigma_z on the probe: |0> gets -omega/2, |1> gets +omega/2
    h0[:half, :half] = h_r - 0.5 * probe.omega * np.eye(half)
    h0[half:, half:] = h_r + 0.5 * probe.omega * np.eye(half)

    b = _coupling_b(spec.a_op)
    h1 = np.zeros((dim, dim), dtype=np.complex128)
    h1[:half, half:] = probe.c * b
    h1[half:, :half] = probe.c * b
    return HermitianOperator(h0), HermitianOperator(h1)


def build_full(spec: ExplicitSpec, probe: ProbeConfig) -> HermitianOperator:
    h0, h1 = full_parts(spec, probe)
    return h0 + h1


def initial_index(n: int) -> int:
    return 2 ** (n + 1)


def reduced_basis(spec: ExplicitSpec) -> np.ndarray:
    """Full-space columns ``|Psi_0>, |Psi_1>, ..., |Psi_N>``."""
    n, dim_s = spec.n, spec.dim
    dim = _check_full_dim(n)
    _, vecs = spec.eigensystem
    basis = np.zeros((dim, dim_s + 1), dtype=np.complex128)
    basis[initial_index(n), 0] = 1.0
    basis[dim_s : 2 * dim_s, 1:] = vecs
    return basis


def overlaps_from_explicit(spec: ExplicitSpec) -> SpectralSpec:
    evals, vecs = spec.eigensystem
    d = vecs.conj().T @ spec.a_op[:, 0]
    return SpectralSpec(evals, d)


def build_reduced(spec: SystemSpec, probe: ProbeConfig) -> ArrowheadHamiltonian:
    if isinstance(spec, ExplicitSpec):
        spec = overlaps_from_explicit(spec)
    return ArrowheadHamiltonian(
        hub_energy=0.5 * probe.omega + probe.epsilon0,
        spoke_energies=-0.5 * probe.omega + spec.energies,
        couplings=probe.c * spec.overlaps,
    )


def build_degenerate(d: float, e_prime: float, n_levels: int) -> SpectralSpec:
    """Ground level ``E_1 = 1`` with overlap ``d``; ``N-1`` levels at ``E' + 1/2``."""
    d = float(d)
    if not 0 < d <= 1:
        raise ValidationError(f"d must lie in (0, 1], got {d}")
    if int(n_levels) < 2:
        raise ValidationError("n_levels must be >= 2")
    n_levels = int(n_levels)
    rest = np.sqrt((1.0 - d * d) / (n_levels - 1))
    energies = np.r_[1.0, np.full(n_levels - 1, float(e_prime) + 0.5)]
    overlaps = np.r_[d, np.full(n_levels - 1, rest)]
    return SpectralSpec(energies, overlaps)
