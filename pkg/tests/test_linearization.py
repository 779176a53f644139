import dataclasses
import math

import numpy as np
import pytest
import scipy.linalg

from benney_cli.core.linearization import (
    LinearizedFlow,
    assemble_j,
    assemble_jh,
    default_zero_tolerance,
    eigen_spectrum_jh,
    energy,
    evolve_linearized,
    generalized_kernel_basis,
    growth_rate,
    verify_no_higher_jordan_blocks,
)
from benney_cli.core.waves import make_dnoidal, make_snoidal
from benney_cli.errors import InconclusiveError, ParameterDomainError

RTOL = 1e-6
RNG = np.random.default_rng(0)

FLOW_GRID = 128


@pytest.fixture(scope="module")
def small_dnoidal_flow():
    op = assemble_jh(make_dnoidal(1.0, 0.0, 1.0, 0.0, 0.5, FLOW_GRID))
    return op, LinearizedFlow(op)


@pytest.fixture(scope="module")
def small_unstable_flow():
    op = assemble_jh(make_snoidal(1.0, 2.0, -1.0, 0.0, 0.5, FLOW_GRID))
    return op, LinearizedFlow(op), eigen_spectrum_jh(op)


def smooth_state(wave, seed=1, modes=3):
    """Random low-mode perturbation (P, V, Q)."""
    rng = np.random.default_rng(seed)
    k = math.pi / wave.half_period
    parts = []
    for _ in range(3):
        a, b = rng.normal(size=(2, modes))
        parts.append(sum(a[j] * np.cos((j + 1) * k * wave.x) + b[j] * np.sin((j + 1) * k * wave.x) for j in range(modes)))
    return np.concatenate(parts)


class TestAssembly:
    def test_j_is_skew(self):
        j = assemble_j(16, 2.0)
        np.testing.assert_allclose(j, -j.T, atol=1e-12)

    def test_reduced_basis(self, dnoidal_jh):
        """Orthonormal, orthogonal to the Nyquist vector, and invariant under JH."""
        n = dnoidal_jh.grid_size
        basis = dnoidal_jh.reduced_basis
        assert basis.shape == (3 * n, 3 * n - 1)
        np.testing.assert_allclose(basis.T @ basis, np.eye(3 * n - 1), atol=1e-12)
        nyquist = np.zeros(3 * n)
        nyquist[n : 2 * n] = (-1.0) ** np.arange(n)
        np.testing.assert_allclose(nyquist @ basis, 0.0, atol=1e-10)
        image = dnoidal_jh.matrix @ basis
        scale = np.linalg.norm(dnoidal_jh.matrix)
        np.testing.assert_allclose(image - basis @ dnoidal_jh.reduced_matrix, 0.0, atol=1e-12 * scale)

    def test_constant_v_maps_to_phi(self, dnoidal_jh, dnoidal_wave):
        """JH (0, 1, 0) = (0, 0, -phi)."""
        n = dnoidal_wave.grid_size
        z = np.zeros(3 * n)
        z[n : 2 * n] = 1.0
        expected = np.concatenate([np.zeros(2 * n), -dnoidal_wave.phi])
        np.testing.assert_allclose(dnoidal_jh.apply(z), expected, atol=1e-10)


class TestEigenSpectrum:
    def test_dnoidal_is_spectrally_stable(self, dnoidal_eigen):
        """Purely imaginary spectrum with a five-dimensional zero cluster."""
        assert dnoidal_eigen.k_real == 0
        assert dnoidal_eigen.k_complex_quadruplets == 0
        assert dnoidal_eigen.zero_cluster_dim == 5
        assert dnoidal_eigen.max_real_part <= 1e-6 * dnoidal_eigen.spectral_radius

    def test_dnoidal_tolerance(self, dnoidal_wave, dnoidal_eigen):
        assert dnoidal_eigen.zero_tolerance == pytest.approx(default_zero_tolerance(dnoidal_wave))

    def test_reduced_dimension(self, dnoidal_wave, dnoidal_eigen):
        assert dnoidal_eigen.eigenvalues.size == 3 * dnoidal_wave.grid_size - 1

    @pytest.mark.parametrize("fixture", ["dnoidal_eigen", "snoidal_eigen", "unstable_snoidal_eigen"])
    def test_quadruplet_symmetry(self, fixture, request):
        """Eigenvalues come in pairs lambda, -lambda."""
        eigen = request.getfixturevalue(fixture)
        assert eigen.symmetry_residual <= 1e-6

    def test_snoidal_has_real_unstable_eigenvalue(self, unstable_snoidal_eigen):
        assert unstable_snoidal_eigen.k_real >= 1
        assert unstable_snoidal_eigen.max_real_part > unstable_snoidal_eigen.zero_tolerance
        assert unstable_snoidal_eigen.zero_cluster_dim == 5

    def test_snoidal_instability_from_quadruplet(self, snoidal_eigen):
        """At beta = 2 the instability is a complex quadruplet 0.2227 +- 0.6374i, no real eigenvalue."""
        assert snoidal_eigen.k_real == 0
        assert snoidal_eigen.k_complex_quadruplets == 1
        assert snoidal_eigen.zero_cluster_dim == 5
        np.testing.assert_allclose(snoidal_eigen.max_real_part, 0.2227, rtol=1e-3)
        lead = snoidal_eigen.eigenvalues[np.argmax(snoidal_eigen.eigenvalues.real)]
        np.testing.assert_allclose(abs(lead.imag), 0.6374, rtol=1e-3)

    def test_report_shapes(self, dnoidal_eigen):
        data = dnoidal_eigen.to_dict()
        assert data["eigenvalues"].shape == (dnoidal_eigen.eigenvalues.size, 2)
        assert len(dnoidal_eigen.to_rows()) == dnoidal_eigen.eigenvalues.size


class TestGeneralizedKernel:
    def test_relations(self, dnoidal_wave, dnoidal_jh):
        """JH k_i = 0, JH g1 = k1 and JH g2 = -k2."""
        basis = generalized_kernel_basis(dnoidal_wave, dnoidal_jh)
        assert basis.max_residual <= 1e-7
        assert basis.smallest_singular_value() > 1e-6

    def test_k3_second_component(self, dnoidal_wave, dnoidal_jh):
        """k3 = (-L^-1 phi, 1 + (2/c) phi L^-1 phi, 0)."""
        basis = generalized_kernel_basis(dnoidal_wave, dnoidal_jh)
        n = dnoidal_wave.grid_size
        c = dnoidal_wave.params.c
        expected = 1.0 + (2.0 / c) * dnoidal_wave.phi * basis.l_inverse_phi
        np.testing.assert_allclose(basis.k3[n : 2 * n], expected, rtol=1e-12)
        np.testing.assert_allclose(basis.k3[2 * n :], 0.0)

    def test_dnoidal_jordan_chains_have_length_two(self, dnoidal_wave, dnoidal_jh):
        basis = generalized_kernel_basis(dnoidal_wave, dnoidal_jh)
        assert verify_no_higher_jordan_blocks(dnoidal_wave, basis, dnoidal_jh)

    def test_snoidal_jordan_chains_have_length_two(self, small_unstable_flow):
        op, _, _ = small_unstable_flow
        basis = generalized_kernel_basis(op.wave, op)
        assert basis.max_residual <= 1e-7
        assert verify_no_higher_jordan_blocks(op.wave, basis, op)

    def test_perturbed_profile_is_rejected(self, dnoidal_wave):
        """A profile that is not a wave loses the five-dimensional zero cluster."""
        k = math.pi / dnoidal_wave.half_period
        phi = dnoidal_wave.phi * (1.0 + 0.1 * np.cos(k * dnoidal_wave.x))
        fake = dataclasses.replace(dnoidal_wave, phi=phi)
        try:
            assert not verify_no_higher_jordan_blocks(fake)
        except InconclusiveError:
            pass


class TestLinearizedFlow:
    def test_time_zero_is_identity(self, small_dnoidal_flow):
        op, flow = small_dnoidal_flow
        z0 = RNG.normal(size=op.matrix.shape[0])
        np.testing.assert_array_equal(flow.evolve(z0, 0.0), z0)

    def test_negative_time_rejected(self, small_dnoidal_flow):
        op, flow = small_dnoidal_flow
        with pytest.raises(ParameterDomainError):
            flow.evolve(np.zeros(op.matrix.shape[0]), -1.0)

    def test_matches_dense_exponential(self, small_dnoidal_flow):
        """Schur propagation agrees with scipy.linalg.expm of JH."""
        op, flow = small_dnoidal_flow
        z0 = smooth_state(op.wave)
        reference = scipy.linalg.expm(0.5 * op.matrix) @ z0
        np.testing.assert_allclose(flow.evolve(z0, 0.5), reference, atol=1e-8 * np.linalg.norm(z0))

    def test_trajectory_matches_evolve(self, small_dnoidal_flow):
        op, flow = small_dnoidal_flow
        z0 = smooth_state(op.wave)
        times = np.linspace(0.0, 2.0, 5)
        for t, state in zip(times, flow.trajectory(z0, times)):
            np.testing.assert_allclose(state, flow.evolve(z0, t), atol=1e-8 * np.linalg.norm(z0))

    def test_energy_conserved(self, small_dnoidal_flow):
        """<H Z(t), Z(t)> is constant along the flow."""
        op, flow = small_dnoidal_flow
        z0 = smooth_state(op.wave)
        e0 = energy(op, z0)
        scale = np.linalg.norm(op.h.matrix, 2) * op.h.inner(z0, z0)
        for t in (1.0, 5.0, 20.0):
            np.testing.assert_allclose(energy(op, flow.evolve(z0, t)), e0, rtol=RTOL, atol=1e-10 * scale)

    def test_dnoidal_growth_is_at_most_linear(self, small_dnoidal_flow):
        """A constant fitted on [0, 10] bounds ||Z(t)|| / ((1 + t) ||Z0||) up to t = 100."""
        op, flow = small_dnoidal_flow
        z0 = smooth_state(op.wave)
        norm0 = np.linalg.norm(z0)
        times = np.linspace(0.0, 10.0, 101)
        fitted = max(
            np.linalg.norm(z) / ((1.0 + t) * norm0) for t, z in zip(times, flow.trajectory(z0, times))
        )
        for t in (25.0, 50.0, 100.0):
            assert np.linalg.norm(flow.evolve(z0, t)) <= 4.0 * fitted * (1.0 + t) * norm0

    def test_growth_rate_of_leading_mode(self, small_unstable_flow):
        """Started on the leading eigenvector the slope over [5, 10] is max Re lambda."""
        op, flow, eigen = small_unstable_flow
        eigenvalues, vectors = scipy.linalg.eig(op.matrix)
        lead = np.argmax(eigenvalues.real)
        rate = growth_rate(op, vectors[:, lead], flow=flow)
        np.testing.assert_allclose(rate, eigen.max_real_part, rtol=1e-4)

    @pytest.mark.parametrize("kind", ["smooth", "noise"])
    def test_growth_rate_from_generic_data(self, small_unstable_flow, kind):
        """Generic real data needs a long window before the quadruplet dominates."""
        op, flow, eigen = small_unstable_flow
        if kind == "smooth":
            z0 = smooth_state(op.wave)
        else:
            z0 = np.random.default_rng(7).normal(size=op.matrix.shape[0])
        rate = growth_rate(op, z0, t_start=50.0, t_stop=150.0, samples=401, flow=flow)
        np.testing.assert_allclose(rate, eigen.max_real_part, rtol=5e-2)

    def test_evolve_linearized_reports_condition(self, small_dnoidal_flow):
        op, flow = small_dnoidal_flow
        z0 = smooth_state(op.wave)
        result = evolve_linearized(op, z0, 1.0, flow=flow)
        assert result.time == 1.0
        assert result.condition >= 1.0
        assert np.isrealobj(result.state)
