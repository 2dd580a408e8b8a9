import math

import numpy as np
import pytest

from oracles import random_hermitian
from probe_resonance.analytic3 import ThreeLevelParams, h3
from probe_resonance.config import settings_override
from probe_resonance.errors import SizeError, StrongCouplingWarning, ValidationError
from probe_resonance.evolve import evolve_series
from probe_resonance.hamiltonian import (
    ArrowheadHamiltonian,
    ExplicitSpec,
    ProbeConfig,
    SpectralSpec,
    build_degenerate,
    build_full,
    build_reduced,
    hadamard_power,
    initial_index,
    overlaps_from_explicit,
    reduced_basis,
)
from probe_resonance.qcore import HADAMARD, SIGMA_X, HermitianOperator, StateVector, eig_hermitian, propagate_exact


@pytest.fixture
def small_explicit():
    return ExplicitSpec(HermitianOperator(np.diag([1.0, 3.0])), HADAMARD.entries)


class TestProbeConfig:
    def test_rejects_nonpositive_omega(self):
        with pytest.raises(ValidationError):
            ProbeConfig(0.0, 0.0, 0.01)

    def test_strong_coupling_warning(self):
        with pytest.warns(StrongCouplingWarning):
            ProbeConfig(1.0, 0.0, 0.5)

    def test_weak_flag(self):
        assert ProbeConfig(1.0, 0.0, 0.01).weak_coupling


class TestSpecs:
    def test_spectral_normalization(self):
        with pytest.raises(ValidationError):
            SpectralSpec([1.0, 2.0], [0.5, 0.5])

    def test_explicit_requires_unitary_a(self):
        with pytest.raises(ValidationError):
            ExplicitSpec(HermitianOperator(np.eye(2)), np.array([[1, 1], [0, 1]]))

    def test_explicit_default_a_is_hadamard_power(self):
        spec = ExplicitSpec(HermitianOperator(np.eye(4)))
        np.testing.assert_allclose(spec.a_op, np.kron(HADAMARD.entries, HADAMARD.entries))

    def test_explicit_dim_power_of_two(self):
        with pytest.raises(ValidationError):
            ExplicitSpec(HermitianOperator(np.eye(3)))


class TestBuildFull:
    def test_entry_hub(self, small_explicit):
        h = build_full(small_explicit, ProbeConfig(1.0, 0.0, 0.01))
        assert h.dim == 8
        assert h.entries[4, 4] == pytest.approx(0.5)  # |1,0,0>

    def test_structure_n1(self, small_explicit):
        h = build_full(small_explicit, ProbeConfig(1.0, 0.25, 0.01)).entries
        diag = np.diag(h).real
        # probe 0: -1/2 + [eps0, 0, 1, 3]; probe 1: +1/2 + same
        np.testing.assert_allclose(diag, [-0.25, -0.5, 0.5, 2.5, 0.75, 0.5, 1.5, 3.5])

    def test_decoupled_is_block_diagonal_and_stationary(self, small_explicit):
        h = build_full(small_explicit, ProbeConfig(1.0, 0.0, 0.0))
        assert np.all(h.entries[:4, 4:] == 0)
        psi0 = StateVector.basis(8, initial_index(1))
        out = propagate_exact(h, psi0, 37.0)
        assert abs(abs(out.amps[4]) - 1) < 1e-14

    def test_coupling_elements_match_diagonalization(self, rng):
        h_s = random_hermitian(rng, 4)
        spec = ExplicitSpec(HermitianOperator(h_s))
        c = 0.03
        h = build_full(spec, ProbeConfig(1.0, 0.0, c)).entries
        # oracle: plain numpy eigh, no phase convention needed for magnitudes
        w, v = np.linalg.eigh(h_s)
        d = v.conj().T @ hadamard_power(2)[:, 0]
        psi0 = np.zeros(16)
        psi0[initial_index(2)] = 1
        for i in range(4):
            psi_i = np.zeros(16, dtype=complex)
            psi_i[4:8] = v[:, i]
            elem = psi_i.conj() @ h @ psi0
            assert abs(elem - c * d[i]) < 1e-13

    def test_hermitian_with_non_hermitian_unitary_a(self):
        s = np.diag([1, 1j])  # unitary, not Hermitian
        spec = ExplicitSpec(HermitianOperator(np.diag([0.0, 2.0])), s)
        h = build_full(spec, ProbeConfig(1.0, 0.0, 0.1))
        np.testing.assert_allclose(h.entries, h.entries.conj().T)

    def test_size_limit(self):
        spec = ExplicitSpec(HermitianOperator(np.eye(8)))
        with settings_override(max_dim=16):
            with pytest.raises(SizeError):
                build_full(spec, ProbeConfig(1.0, 0.0, 0.01))


class TestReduced:
    def test_single_level(self):
        arrow = build_reduced(SpectralSpec([1.0], [1.0]), ProbeConfig(1.0, 0.0, 0.02))
        np.testing.assert_allclose(arrow.dense().entries, [[0.5, 0.02], [0.02, 0.5]])

    def test_arrowhead_zeros(self, rng):
        spec = SpectralSpec(np.sort(rng.uniform(0, 5, 6)), np.full(6, 1 / math.sqrt(6)))
        m = build_reduced(spec, ProbeConfig(1.0, 0.0, 0.1)).dense().entries
        inner = m[1:, 1:]
        assert np.all(inner[~np.eye(6, dtype=bool)] == 0)

    def test_complex_overlaps_hermitian_completion(self):
        d = np.array([0.6, 0.8j])
        m = build_reduced(SpectralSpec([1.0, 2.0], d), ProbeConfig(1.0, 0.0, 0.1)).dense().entries
        assert m[2, 0] == pytest.approx(0.08j)
        assert m[0, 2] == pytest.approx(-0.08j)

    def test_explicit_couplings_match_diagonalization(self, rng):
        h_s = HermitianOperator(random_hermitian(rng, 4))
        spec = ExplicitSpec(h_s, np.kron(HADAMARD.entries, HADAMARD.entries))
        c = 0.05
        arrow = build_reduced(spec, ProbeConfig(1.0, 0.0, c))
        w, v = eig_hermitian(h_s)
        a00 = spec.a_op[:, 0]
        np.testing.assert_allclose(arrow.couplings, c * (v.conj().T @ a00), atol=1e-14)
        np.testing.assert_allclose(arrow.spoke_energies, -0.5 + w, atol=1e-14)

    @pytest.mark.parametrize("n_levels", [2, 3, 17])
    def test_degenerate_collapses_to_three_level(self, n_levels):
        d, e_prime, c = 0.3, 4.0, 0.05
        arrow = build_reduced(build_degenerate(d, e_prime, n_levels), ProbeConfig(1.0, 0.0, c))
        collapsed, groups = arrow.collapse()
        assert [len(g) for g in groups] == [1, n_levels - 1]
        want = h3(ThreeLevelParams(c=c, d=d, e_prime=e_prime)).entries
        np.testing.assert_allclose(collapsed.dense().entries, want, atol=1e-15)

    def test_projection_matches_arrowhead(self, rng):
        spec = ExplicitSpec(HermitianOperator(random_hermitian(rng, 8)))
        probe = ProbeConfig(1.3, -0.4, 0.02)
        full = build_full(spec, probe).entries
        basis = reduced_basis(spec)
        projected = basis.conj().T @ full @ basis
        dense = build_reduced(spec, probe).dense().entries
        assert np.max(np.abs(projected - dense)) < 1e-12


class TestOverlaps:
    def test_identity_a_ground_is_zero_state(self):
        spec = ExplicitSpec(HermitianOperator(np.diag([0.0, 1.0, 2.0, 3.0])), np.eye(4))
        sp = overlaps_from_explicit(spec)
        np.testing.assert_allclose(sp.overlaps, [1, 0, 0, 0], atol=1e-15)
        np.testing.assert_allclose(sp.energies, [0, 1, 2, 3])

    def test_sigma_x(self):
        sp = overlaps_from_explicit(ExplicitSpec(SIGMA_X, np.eye(2)))
        np.testing.assert_allclose(sp.energies, [-1, 1], atol=1e-15)
        np.testing.assert_allclose(np.abs(sp.overlaps), [1 / math.sqrt(2)] * 2, atol=1e-15)

    def test_completeness_n3(self, rng):
        spec = ExplicitSpec(HermitianOperator(random_hermitian(rng, 8)))
        sp = overlaps_from_explicit(spec)
        assert abs(np.sum(np.abs(sp.overlaps) ** 2) - 1) < 1e-10
        assert np.all(np.diff(sp.energies) >= 0)


class TestDegenerate:
    def test_d_one(self):
        sp = build_degenerate(1.0, 3.0, 4)
        np.testing.assert_allclose(sp.overlaps, [1, 0, 0, 0])

    def test_values(self):
        sp = build_degenerate(0.01, 5.0, 3)
        np.testing.assert_allclose(sp.overlaps.real, [0.01, 0.7070714249635606, 0.7070714249635606], rtol=1e-15)
        np.testing.assert_allclose(sp.energies, [1.0, 5.5, 5.5])

    def test_rejects_d_above_one(self):
        with pytest.raises(ValidationError):
            build_degenerate(1.2, 5.0, 3)

    def test_collapse_invariance_in_n(self):
        probe = ProbeConfig(1.0, 0.0, 0.1)
        times = np.linspace(0, 200, 301)
        p2 = evolve_series(build_degenerate(0.2, 3.0, 2), probe, times).success_prob
        p64 = evolve_series(build_degenerate(0.2, 3.0, 64), probe, times).success_prob
        assert np.max(np.abs(p2 - p64)) < 1e-10


def test_arrowhead_length_check():
    with pytest.raises(ValidationError):
        ArrowheadHamiltonian(0.0, [1.0, 2.0], [0.1])
