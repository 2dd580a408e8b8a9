import numpy as np
import pytest

from probe_resonance import _kernels
from probe_resonance.analytic3 import ThreeLevelParams, h3
from probe_resonance.qcore import propagator

BACKENDS = ["numpy", "numba"] if _kernels.BACKEND == "numba" else ["numpy"]


@pytest.mark.parametrize("backend", BACKENDS)
def test_spectral_amplitudes(rng, backend):
    evals = rng.normal(size=5)
    weights = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
    times = np.linspace(0, 7, 11)
    got = _kernels.spectral_amplitudes(evals, weights, times, backend=backend)
    want = np.array([[np.sum(w * np.exp(-1j * evals * t)) for w in weights] for t in times])
    np.testing.assert_allclose(got, want, atol=1e-12)


@pytest.mark.parametrize("backend", BACKENDS)
def test_repeated_matvec(rng, backend):
    u = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
    psi = rng.normal(size=4) + 0j
    got = _kernels.repeated_matvec(u, psi, 5, backend=backend)
    np.testing.assert_allclose(got, np.linalg.matrix_power(u, 5) @ psi, atol=1e-12)


@pytest.mark.parametrize("backend", BACKENDS)
def test_three_level_against_propagator(backend):
    p = ThreeLevelParams.from_alpha(0.1, 5.0, 0.5)
    times = np.array([0.0, 3.0, 40.0, 200.0])
    got = _kernels.three_level_pointwise(p.hub, p.g1, p.g2, p.e_prime, times, backend=backend)
    want = [abs(propagator(h3(p), t)[1, 0]) ** 2 for t in times]
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_backends_agree(rng):
    if len(BACKENDS) < 2:
        pytest.skip("numba unavailable")
    k = 7
    a = np.full(k, 0.5)
    g1 = rng.uniform(1e-3, 0.5, k)
    g2 = rng.uniform(1e-3, 0.5, k)
    e2 = rng.uniform(0, 20, k)
    times = np.linspace(0, 500, 301)
    grid = [_kernels.three_level_grid(a, g1, g2, e2, times, backend=b) for b in BACKENDS]
    np.testing.assert_allclose(grid[0], grid[1], atol=1e-12)
    pts = [_kernels.three_level_pointwise(a, g1, g2, e2, np.linspace(0, 50, k), backend=b) for b in BACKENDS]
    np.testing.assert_allclose(pts[0], pts[1], atol=1e-12)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.repeated_matvec(np.eye(2, dtype=complex), np.ones(2, dtype=complex), 1, backend="cuda")
