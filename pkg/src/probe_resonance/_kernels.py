"""Hot inner loops, compiled with numba when available.

Set ``PROBE_RESONANCE_BACKEND=numpy`` to force the pure-numpy fallbacks
(useful for debugging and for the benchmark in ``benchmarks/``). Both paths
compute the same quantities; they agree to rounding.

Kernels
-------
spectral_amplitudes
    ``out[n, j] = sum_k w[j, k] * exp(-1j * evals[k] * times[n])``
repeated_matvec
    ``u @ u @ ... @ psi`` (``m`` applications)
three_level_pointwise / three_level_grid
    Success probability of the real symmetric 3x3 model
    ``[[a, g1, g2], [g1, a, 0], [g2, 0, e2]]`` started in state 0,
    read on state 1.
"""

from __future__ import annotations

import os

import numpy as np

_requested = os.environ.get("PROBE_RESONANCE_BACKEND", "numba").strip().lower()

try:
    if _requested == "numpy":
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - depends on environment
    njit = None

BACKEND = "numba" if njit is not None else "numpy"


# ---------------------------------------------------------------- numpy path


def _spectral_amplitudes_np(evals, weights, times):
    phases = np.exp(-1j * np.outer(times, evals))
    return phases @ weights.T


def _repeated_matvec_np(u, psi, m):
    out = psi.copy()
    for _ in range(m):
        out = u @ out
    return out


def _three_level_stack(a, g1, g2, e2):
    k = a.shape[0]
    h = np.zeros((k, 3, 3))
    h[:, 0, 0] = a
    h[:, 1, 1] = a
    h[:, 2, 2] = e2
    h[:, 0, 1] = h[:, 1, 0] = g1
    h[:, 0, 2] = h[:, 2, 0] = g2
    return np.linalg.eigh(h)


def _three_level_pointwise_np(a, g1, g2, e2, times):
    w, v = _three_level_stack(a, g1, g2, e2)
    amp = np.sum(v[:, 1, :] * v[:, 0, :] * np.exp(-1j * w * times[:, None]), axis=1)
    return amp.real**2 + amp.imag**2


def _three_level_grid_np(a, g1, g2, e2, times):
    w, v = _three_level_stack(a, g1, g2, e2)
    wt = v[:, 1, :] * v[:, 0, :]
    phases = np.exp(-1j * w[:, :, None] * times[None, None, :])
    amp = np.einsum("kj,kjn->kn", wt, phases)
    return amp.real**2 + amp.imag**2


# ---------------------------------------------------------------- numba path

if njit is not None:

    @njit(cache=True, nogil=True)
    def _spectral_amplitudes_nb(evals, weights, times):
        n_t = times.shape[0]
        n_j, n_k = weights.shape
        out = np.zeros((n_t, n_j), dtype=np.complex128)
        ph = np.empty(n_k, dtype=np.complex128)
        for n in range(n_t):
            for k in range(n_k):
                x = -evals[k] * times[n]
                ph[k] = complex(np.cos(x), np.sin(x))
            for j in range(n_j):
                acc = 0j
                for k in range(n_k):
                    acc += weights[j, k] * ph[k]
                out[n, j] = acc
        return out

    @njit(cache=True, nogil=True)
    def _repeated_matvec_nb(u, psi, m):
        dim = psi.shape[0]
        cur = psi.copy()
        nxt = np.empty_like(cur)
        for _ in range(m):
            for i in range(dim):
                acc = 0j
                for j in range(dim):
                    acc += u[i, j] * cur[j]
                nxt[i] = acc
            cur, nxt = nxt, cur
        return cur

    @njit(cache=True, nogil=True)
    def _three_level_eig(a, g1, g2, e2):
        h = np.zeros((3, 3))
        h[0, 0] = a
        h[1, 1] = a
        h[2, 2] = e2
        h[0, 1] = g1
        h[1, 0] = g1
        h[0, 2] = g2
        h[2, 0] = g2
        return np.linalg.eigh(h)

    @njit(cache=True, nogil=True)
    def _three_level_pointwise_nb(a, g1, g2, e2, times):
        n = a.shape[0]
        out = np.empty(n)
        for i in range(n):
            w, v = _three_level_eig(a[i], g1[i], g2[i], e2[i])
            re = 0.0
            im = 0.0
            for k in range(3):
                wk = v[1, k] * v[0, k]
                x = -w[k] * times[i]
                re += wk * np.cos(x)
                im += wk * np.sin(x)
            out[i] = re * re + im * im
        return out

    @njit(cache=True, nogil=True)
    def _three_level_grid_nb(a, g1, g2, e2, times):
        n = a.shape[0]
        n_t = times.shape[0]
        out = np.empty((n, n_t))
        for i in range(n):
            w, v = _three_level_eig(a[i], g1[i], g2[i], e2[i])
            for m in range(n_t):
                re = 0.0
                im = 0.0
                for k in range(3):
                    wk = v[1, k] * v[0, k]
                    x = -w[k] * times[m]
                    re += wk * np.cos(x)
                    im += wk * np.sin(x)
                out[i, m] = re * re + im * im
        return out


# ---------------------------------------------------------------- dispatch


def _resolve(backend: str | None) -> str:
    if backend is None:
        return BACKEND
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}; use 'numba' or 'numpy'")
    if backend == "numba" and njit is None:
        raise ValueError("numba backend requested but numba is unavailable")
    return backend


def _f64(x):
    return np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=np.float64)))


def _c128(x):
    return np.ascontiguousarray(np.asarray(x, dtype=np.complex128))


def spectral_amplitudes(evals, weights, times, backend: str | None = None):
    backend = _resolve(backend)
    evals, times, weights = _f64(evals), _f64(times), _c128(np.atleast_2d(weights))
    if backend == "numba":
        return _spectral_amplitudes_nb(evals, weights, times)
    return _spectral_amplitudes_np(evals, weights, times)


def repeated_matvec(u, psi, m: int, backend: str | None = None):
    backend = _resolve(backend)
    u, psi = _c128(u), _c128(psi)
    if backend == "numba":
        return _repeated_matvec_nb(u, psi, int(m))
    return _repeated_matvec_np(u, psi, int(m))


def _broadcast_params(a, g1, g2, e2, times=None):
    arrays = [_f64(x) for x in (a, g1, g2, e2)] + ([] if times is None else [_f64(times)])
    return [np.ascontiguousarray(x) for x in np.broadcast_arrays(*arrays)]


def three_level_pointwise(a, g1, g2, e2, times, backend: str | None = None):
    backend = _resolve(backend)
    a, g1, g2, e2, times = _broadcast_params(a, g1, g2, e2, times)
    if backend == "numba":
        return _three_level_pointwise_nb(a, g1, g2, e2, times)
    return _three_level_pointwise_np(a, g1, g2, e2, times)


def three_level_grid(a, g1, g2, e2, times, backend: str | None = None):
    backend = _resolve(backend)
    a, g1, g2, e2 = _broadcast_params(a, g1, g2, e2)
    times = _f64(times)
    if backend == "numba":
        return _three_level_grid_nb(a, g1, g2, e2, times)
    return _three_level_grid_np(a, g1, g2, e2, times)
