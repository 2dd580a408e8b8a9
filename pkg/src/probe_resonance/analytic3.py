"""Degenerate three-level model: closed-form amplitude and numeric oracle.

With the excited manifold of the system ``(N-1)``-fold degenerate, the
dynamics from ``|Psi_0>`` stay in span{|Psi_0>, |Psi_1>, |Psi_2>} where
``|Psi_2>`` is the symmetric excited combination. In that basis::

    H = [[a,            c d,  c sqrt(1-d^2)],
         [c d,          a,    0            ],
         [c sqrt(1-d^2), 0,   E'           ]],   a = omega/2 + epsilon0

The amplitude on ``|Psi_1>`` is a sum of residues over the roots ``x`` of a
cubic (the characteristic polynomial written in ``x = -i * lambda``).
:func:`p_numeric3` propagates the matrix directly and is the normative route;
:func:`p_analytic` exists to cross-check the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateRootsError, NumericError, ValidationError
from .qcore import HermitianOperator, StateVector, propagate_exact

__all__ = [
    "ThreeLevelParams",
    "h3",
    "cubic_coefficients",
    "cubic_roots",
    "p_analytic",
    "p_numeric3",
    "ROOT_SEPARATION",
]

ROOT_SEPARATION = 1e-8
_CLAMP_SLACK = 1e-8


@dataclass(frozen=True)
class ThreeLevelParams:
    c: float
    d: float
    e_prime: float
    omega: float = 1.0
    epsilon0: float = 0.0
    alpha: float | None = None

    def __post_init__(self):
        if not self.c > 0:
            raise ValidationError("c must be > 0")
        if not 0 < self.d <= 1:
            raise ValidationError("d must lie in (0, 1]")
        if self.alpha is not None:
            if self.alpha < 0:
                raise ValidationError("alpha must be >= 0")
            if abs(self.c - self.d**self.alpha) > 1e-14:
                raise ValidationError("c must equal d**alpha when alpha is given")

    @classmethod
    def from_alpha(cls, d: float, e_prime: float, alpha: float, omega: float = 1.0, epsilon0: float = 0.0):
        return cls(c=d**alpha, d=d, e_prime=e_prime, omega=omega, epsilon0=epsilon0, alpha=alpha)

    @property
    def hub(self) -> float:
        return 0.5 * self.omega + self.epsilon0

    @property
    def g1(self) -> float:
        return self.c * self.d

    @property
    def g2(self) -> float:
        return self.c * math.sqrt(max(0.0, 1.0 - self.d * self.d))

    def runtime(self) -> float:
        """``t = (pi/2) / (c d)``."""
        return 0.5 * math.pi / (self.c * self.d)


def h3(params: ThreeLevelParams) -> HermitianOperator:
    a, g1, g2 = params.hub, params.g1, params.g2
    return HermitianOperator(
        np.array(
            [
                [a, g1, g2],
                [g1, a, 0.0],
                [g2, 0.0, params.e_prime],
            ]
        )
    )


def cubic_coefficients(params: ThreeLevelParams) -> np.ndarray:
    """Coefficients (highest power first) of ``4 det(x + iH)``-type cubic.

    For ``omega = 1, epsilon0 = 0`` this is
    ``4x^3 + 4i(E'+1)x^2 + (4c^2 - 4E' - 1)x + i(4c^2d^2E' - 2c^2d^2 + 2c^2 - E')``.
    """
    a, e, c2, d2 = params.hub, params.e_prime, params.c**2, params.d**2
    return np.array(
        [
            4.0,
            4j * (e + 2 * a),
            4.0 * (c2 - 2 * a * e - a * a),
            4j * (c2 * d2 * e + c2 * (1 - d2) * a - a * a * e),
        ]
    )


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    monic = coeffs[1:] / coeffs[0]
    k = monic.size
    comp = np.zeros((k, k), dtype=np.complex128)
    comp[0, :] = -monic
    comp[np.arange(1, k), np.arange(k - 1)] = 1.0
    return np.linalg.eigvals(comp)


def _polish(coeffs: np.ndarray, roots: np.ndarray, iters: int = 3) -> np.ndarray:
    deriv = np.polyder(coeffs)
    out = roots.copy()
    for _ in range(iters):
        dp = np.polyval(deriv, out)
        ok = dp != 0
        out[ok] -= np.polyval(coeffs, out[ok]) / dp[ok]
    return out


def _min_separation(roots: np.ndarray) -> float:
    return min(abs(roots[i] - roots[j]) for i in range(len(roots)) for j in range(i + 1, len(roots)))


def cubic_roots(params: ThreeLevelParams, *, check: bool = True) -> np.ndarray:
    """Roots via companion-matrix eigenvalues, sorted by (imag, real).

    Raises :class:`DegenerateRootsError` when two roots are closer than
    ``ROOT_SEPARATION`` (unless ``check`` is False).
    """
    coeffs = cubic_coefficients(params)
    roots = _polish(coeffs, _companion_roots(coeffs))
    roots = np.array(sorted(roots, key=lambda z: (z.imag, z.real)))
    # clustered companion roots are only accurate to ~eps**(1/m); the roots are
    # -i times the eigenvalues of h3, whose gaps are well conditioned
    gap = float(np.min(np.diff(np.linalg.eigvalsh(h3(params).entries))))
    if check and min(_min_separation(roots), gap) < ROOT_SEPARATION:
        raise DegenerateRootsError("cubic roots are nearly repeated; use p_numeric3")
    return roots


def _residue_denominator(params: ThreeLevelParams, x: np.ndarray, residue: str) -> np.ndarray:
    a, e, c2 = params.hub, params.e_prime, params.c**2
    if residue == "quadratic":
        # 12ix^2 - 8(E'+1)x + 4ic^2 - 4iE' - i, generalised to hub energy a
        return 12j * x**2 - 8 * (e + 2 * a) * x + 4j * (c2 - 2 * a * e - a * a)
    if residue == "derivative":
        # i * p'(x), with p'(x) taken from the polynomial coefficients directly
        return 1j * np.polyval(np.polyder(cubic_coefficients(params)), x)
    raise ValidationError(f"unknown residue form {residue!r}")


def p_analytic(params: ThreeLevelParams, t, residue: str = "quadratic"):
    """``|c_1(t)|^2`` from the residue sum over the cubic's roots.

    ``residue="quadratic"`` uses the expanded quadratic denominator;
    ``residue="derivative"`` builds ``i p'(x)`` from the coefficients. The
    two are algebraically identical and serve as a cross-check.
    """
    roots = cubic_roots(params)
    t_arr = np.asarray(t, dtype=float)
    x = roots[:, None]
    num = (1j * params.e_prime + x) * np.exp(x * t_arr.ravel()[None, :])
    amp = 4 * params.c * params.d * np.sum(num / _residue_denominator(params, x, residue), axis=0)
    p = amp.real**2 + amp.imag**2
    if np.any(p > 1 + _CLAMP_SLACK) or np.any(p < -_CLAMP_SLACK):
        raise NumericError(f"closed-form probability left [0, 1] (max {p.max():.3e})")
    p = np.clip(p, 0.0, 1.0)
    return float(p[0]) if t_arr.ndim == 0 else p.reshape(t_arr.shape)


def p_numeric3(params: ThreeLevelParams, t):
    """Exact 3x3 propagation from state 0, probability on state 1."""
    t_arr = np.asarray(t, dtype=float)
    if t_arr.ndim == 0:
        psi = propagate_exact(h3(params), StateVector.basis(3, 0), float(t_arr))
        return min(1.0, float(abs(psi.amps[1]) ** 2))
    p = _kernels.three_level_pointwise(params.hub, params.g1, params.g2, params.e_prime, t_arr.ravel())
    return np.minimum(p, 1.0).reshape(t_arr.shape)
