"""Independent reference computations used by the tests.

None of these go through the package's eigendecomposition path.
"""

from __future__ import annotations

import numpy as np


def kron_loop(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=np.complex128)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for m in range(cb):
                    out[i * rb + k, j * cb + m] = a[i, j] * b[k, m]
    return out


def expm_taylor(h: np.ndarray, t: float, terms: int = 30) -> np.ndarray:
    """``exp(-i h t)`` by scaling, truncated Taylor series, and repeated squaring."""
    x = -1j * t * np.asarray(h, dtype=np.complex128)
    norm = np.max(np.sum(np.abs(x), axis=1))
    s = max(0, int(np.ceil(np.log2(norm / 0.25))) if norm > 0 else 0)
    x = x / 2**s
    term = np.eye(x.shape[0], dtype=np.complex128)
    out = term.copy()
    for k in range(1, terms):
        term = term @ x / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (x + x.conj().T)


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def rk4_three_level(h: np.ndarray, t: float, steps: int) -> np.ndarray:
    """Classical RK4 integration of ``i dpsi/dt = h psi`` from state 0."""
    psi = np.zeros(h.shape[0], dtype=np.complex128)
    psi[0] = 1.0
    dt = t / steps
    f = lambda y: -1j * (h @ y)
    for _ in range(steps):
        k1 = f(psi)
        k2 = f(psi + 0.5 * dt * k1)
        k3 = f(psi + 0.5 * dt * k2)
        k4 = f(psi + dt * k3)
        psi = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi
