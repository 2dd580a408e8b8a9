"""First-order transition probability into off-resonant levels.

For level ``j`` with overlap ``d_j`` the hub-to-spoke transfer is a detuned
Rabi oscillation::

    P_j(tau) = sin^2(Omega_0j tau / 2) * Q_0j^2 / (Q_0j^2 + (E_j - eps0 - omega)^2)
    Q_0j = 2 c |d_j|,   Omega_0j = sqrt(Q_0j^2 + (E_j - eps0 - omega)^2)

It ignores every other level, so it is only trustworthy while ``c * tau`` is
small (first order in the coupling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .hamiltonian import ExplicitSpec, ProbeConfig, SpectralSpec, overlaps_from_explicit

__all__ = ["OffResonantTransition", "off_resonant_transition", "first_order_prob"]


@dataclass(frozen=True)
class OffResonantTransition:
    level_index: int
    q0j: float
    detuning: float

    @property
    def omega0j(self) -> float:
        return math.hypot(self.q0j, self.detuning)

    @property
    def envelope(self) -> float:
        """Upper bound ``Q^2 / (Q^2 + detuning^2)`` over all times."""
        if self.q0j == 0.0:
            return 0.0
        return (self.q0j / self.omega0j) ** 2

    def probability_at(self, tau):
        s = np.sin(0.5 * self.omega0j * np.asarray(tau, dtype=float))
        p = self.envelope * s * s
        return float(p) if np.ndim(p) == 0 else p


def off_resonant_transition(spec: SpectralSpec | ExplicitSpec, probe: ProbeConfig, j: int) -> OffResonantTransition:
    """Transition data for level ``j`` (1-based, ``2 <= j <= N``)."""
    if isinstance(spec, ExplicitSpec):
        spec = overlaps_from_explicit(spec)
    n = spec.n_levels
    if not 2 <= int(j) <= n:
        raise ValidationError(f"level index j={j} must satisfy 2 <= j <= {n}")
    j = int(j)
    q = 2.0 * probe.c * abs(spec.overlaps[j - 1])
    detuning = float(spec.energies[j - 1]) - probe.epsilon0 - probe.omega
    return OffResonantTransition(j, q, detuning)


def first_order_prob(spec: SpectralSpec | ExplicitSpec, probe: ProbeConfig, j: int, tau):
    return off_resonant_transition(spec, probe, j).probability_at(tau)
