import math

import numpy as np
import pytest

from finbath.qdyn import (
    CompositeSpace,
    DensityMatrix,
    DimensionMismatchError,
    HermitianOperator,
    SpectralDecomposition,
    SupportViolationError,
    evolve,
    extract_local,
    partial_trace,
    pauli,
    relative_entropy,
    von_neumann_entropy,
)

QUBIT = CompositeSpace((("S", 2),))
TWO_QUBITS = CompositeSpace((("S", 2), ("B1", 2)))


def dm(matrix, space=QUBIT):
    return DensityMatrix(space, np.asarray(matrix, dtype=complex))


def random_density(space, rng):
    d = space.total_dim
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = a @ a.conj().T
    return DensityMatrix(space, m / np.trace(m))


class TestCompositeSpace:
    def test_total_dim(self):
        space = CompositeSpace((("S", 2), ("B", 3), ("C", 4)))
        assert space.total_dim == 24
        assert space.labels == ("S", "B", "C")

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError, match="unique"):
            CompositeSpace((("S", 2), ("S", 2)))

    def test_small_dimension_rejected(self):
        with pytest.raises(ValueError, match="dimension"):
            CompositeSpace((("S", 1),))

    def test_subspace_keeps_order(self):
        space = CompositeSpace((("A", 2), ("B", 3), ("C", 2)))
        assert space.subspace({"C", "A"}).labels == ("A", "C")


class TestPauli:
    def test_z_is_diag(self):
        z = pauli("z", "S", QUBIT)
        assert np.array_equal(z.matrix, np.diag([1.0, -1.0]).astype(complex))

    def test_involution(self):
        x = pauli("x", "S", QUBIT)
        assert np.allclose(x.matrix @ x.matrix, np.eye(2))

    def test_commutator_algebra(self):
        x, y, z = (pauli(k, "S", QUBIT) for k in "xyz")
        comm = x.matrix @ y.matrix - y.matrix @ x.matrix
        assert np.allclose(comm, 2j * z.matrix, atol=1e-15)

    def test_embedding_acts_on_one_site(self):
        z1 = pauli("z", "B1", TWO_QUBITS)
        assert np.array_equal(z1.matrix, np.kron(np.eye(2), np.diag([1.0, -1.0])))

    def test_unknown_label(self):
        with pytest.raises(ValueError, match="unknown factor label"):
            pauli("x", "Q", QUBIT)

    def test_non_qubit_factor(self):
        space = CompositeSpace((("B", 3),))
        with pytest.raises(ValueError, match="not a qubit"):
            pauli("x", "B", space)


class TestHermitianOperator:
    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            HermitianOperator(QUBIT, np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_addition_requires_same_space(self):
        a = pauli("x", "S", QUBIT)
        b = pauli("x", "S", TWO_QUBITS)
        with pytest.raises(DimensionMismatchError):
            a + b


class TestSpectralDecomposition:
    def test_reconstruction_and_propagator_unitarity(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        op = HermitianOperator(
            CompositeSpace((("A", 2), ("B", 3))), 0.5 * (a + a.conj().T)
        )
        sd = SpectralDecomposition.from_operator(op)
        recon = (sd.eigenvectors * sd.eigenvalues) @ sd.eigenvectors.conj().T
        assert np.max(np.abs(recon - op.matrix)) <= 1e-10 * np.max(np.abs(op.matrix))
        u = sd.propagator(0.7)
        assert np.max(np.abs(u.conj().T @ u - np.eye(6))) <= 1e-12


class TestEvolve:
    def test_commuting_state_is_stationary(self):
        rho0 = dm(np.diag([0.7, 0.3]))
        h = pauli("z", "S", QUBIT)
        for rho_t in evolve(rho0, h, [0.0, 0.3, 2.7]):
            assert np.allclose(rho_t.matrix, rho0.matrix, atol=1e-14)

    def test_time_zero_returns_state_exactly(self):
        rng = np.random.default_rng(5)
        rho0 = random_density(TWO_QUBITS, rng)
        h = pauli("x", "S", TWO_QUBITS) + pauli("z", "B1", TWO_QUBITS)
        (rho_t,) = evolve(rho0, h, [0.0])
        assert np.array_equal(rho_t.matrix, rho0.matrix)

    def test_plus_state_half_period(self):
        # oracle: U = exp(-i sigma_z pi/2) = diag(-i, i) by direct 2x2 exponential,
        # so |+><+| maps to |-><-|
        plus = dm(np.full((2, 2), 0.5))
        minus = np.array([[0.5, -0.5], [-0.5, 0.5]])
        (rho_t,) = evolve(plus, pauli("z", "S", QUBIT), [math.pi / 2])
        assert np.allclose(rho_t.matrix, minus, atol=1e-14)

    def test_dimension_mismatch(self):
        rho0 = dm(np.eye(2) / 2)
        with pytest.raises(DimensionMismatchError):
            evolve(rho0, pauli("z", "S", TWO_QUBITS), [0.1])

    def test_preserves_trace_hermiticity_spectrum_energy(self):
        rng = np.random.default_rng(11)
        space = CompositeSpace((("S", 2), ("B", 5)))
        rho0 = random_density(space, rng)
        a = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
        h = HermitianOperator(space, 0.5 * (a + a.conj().T))
        spectrum0 = np.linalg.eigvalsh(rho0.matrix)
        e0 = np.einsum("ij,ji->", h.matrix, rho0.matrix).real
        for rho_t in evolve(rho0, h, np.linspace(0.0, 4.0, 7)):
            m = rho_t.matrix
            assert abs(np.trace(m) - 1.0) <= 1e-10
            assert np.max(np.abs(m - m.conj().T)) <= 1e-12
            assert np.max(np.abs(np.linalg.eigvalsh(m) - spectrum0)) <= 1e-10
            e_t = np.einsum("ij,ji->", h.matrix, m).real
            assert abs(e_t - e0) <= 1e-10 * max(1.0, abs(e0))


class TestPartialTrace:
    def test_product_state_factorizes(self):
        rng = np.random.default_rng(7)
        rho_s = random_density(QUBIT, rng)
        rho_b = random_density(CompositeSpace((("B1", 2),)), rng)
        joint = DensityMatrix(TWO_QUBITS, np.kron(rho_s.matrix, rho_b.matrix))
        red = partial_trace(joint, {"S"})
        assert np.allclose(red.matrix, rho_s.matrix, atol=1e-14)

    def test_bell_state_reduces_to_maximally_mixed(self):
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1.0 / math.sqrt(2.0)
        bell = DensityMatrix(TWO_QUBITS, np.outer(psi, psi.conj()))
        red = partial_trace(bell, {"B1"})
        assert np.allclose(red.matrix, np.eye(2) / 2, atol=1e-14)

    def test_keep_all_is_identity(self):
        rho = dm(np.eye(2) / 2)
        assert partial_trace(rho, {"S"}) is rho

    def test_sequential_order_agrees(self):
        rng = np.random.default_rng(13)
        space = CompositeSpace((("A", 2), ("B", 3), ("C", 2)))
        rho = random_density(space, rng)
        direct = partial_trace(rho, {"B"})
        via_ab = partial_trace(partial_trace(rho, {"A", "B"}), {"B"})
        via_bc = partial_trace(partial_trace(rho, {"B", "C"}), {"B"})
        assert np.max(np.abs(direct.matrix - via_ab.matrix)) <= 1e-12
        assert np.max(np.abs(direct.matrix - via_bc.matrix)) <= 1e-12
        assert abs(np.trace(direct.matrix) - 1.0) <= 1e-12

    def test_empty_and_unknown_keep(self):
        rho = dm(np.eye(2) / 2)
        with pytest.raises(ValueError, match="non-empty"):
            partial_trace(rho, set())
        with pytest.raises(ValueError, match="unknown"):
            partial_trace(rho, {"X"})


class TestExtractLocal:
    def test_embedded_operator_recovered(self):
        h_local = np.array([[0.3, 0.1j], [-0.1j, -0.2]])
        h = HermitianOperator(TWO_QUBITS, np.kron(np.eye(2), h_local))
        out = extract_local(h, {"B1"})
        assert np.allclose(out.matrix, h_local, atol=1e-14)

    def test_coupling_operator_rejected(self):
        xx = pauli("x", "S", TWO_QUBITS).matrix @ pauli("x", "B1", TWO_QUBITS).matrix
        op = HermitianOperator(TWO_QUBITS, xx)
        with pytest.raises(ValueError, match="identity outside"):
            extract_local(op, {"B1"})


class TestEntropies:
    def test_pure_state_zero(self):
        assert von_neumann_entropy(dm(np.diag([1.0, 0.0]))) == 0.0

    def test_maximally_mixed_qubit(self):
        assert abs(von_neumann_entropy(dm(np.eye(2) / 2)) - math.log(2)) <= 1e-14

    def test_two_level_mixture(self):
        # scalar oracle: -0.9 ln 0.9 - 0.1 ln 0.1
        expected = -(0.9 * math.log(0.9) + 0.1 * math.log(0.1))
        assert abs(expected - 0.32508297339144822) <= 1e-15
        assert abs(von_neumann_entropy(dm(np.diag([0.9, 0.1]))) - expected) <= 1e-14

    def test_unitary_invariance(self):
        rng = np.random.default_rng(17)
        rho = random_density(TWO_QUBITS, rng)
        h = pauli("x", "S", TWO_QUBITS) + 0.4 * pauli("y", "B1", TWO_QUBITS)
        (rho_t,) = evolve(rho, h, [1.3])
        rotated = DensityMatrix(TWO_QUBITS, rho_t.matrix)  # fresh spectrum
        assert abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) <= 1e-11

    def test_relative_entropy_self_is_zero(self):
        rng = np.random.default_rng(19)
        rho = random_density(QUBIT, rng)
        assert abs(relative_entropy(rho, rho)) <= 1e-12

    def test_relative_entropy_pure_vs_mixed(self):
        val = relative_entropy(dm(np.diag([1.0, 0.0])), dm(np.eye(2) / 2))
        assert abs(val - math.log(2)) <= 1e-12

    def test_relative_entropy_nonnegative(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            rho = random_density(TWO_QUBITS, rng)
            sigma = random_density(TWO_QUBITS, rng)
            assert relative_entropy(rho, sigma) >= -1e-12

    def test_support_violation(self):
        rho = dm(np.eye(2) / 2)
        sigma = dm(np.diag([1.0, 0.0]))
        with pytest.raises(SupportViolationError, match="infinite divergence"):
            relative_entropy(rho, sigma)

    def test_gibbs_pair_matches_canonical_oracle(self):
        # single-qubit bath with gap 1: matrix route against the scalar
        # canonical-family route from the thermo module
        from finbath.thermo import (
            BathSpectrum,
            canonical_relative_entropy,
            gibbs_state,
        )

        spec = BathSpectrum(
            CompositeSpace((("B", 2),)), np.array([0.0, 1.0]), np.eye(2)
        )
        matrix_route = relative_entropy(gibbs_state(spec, 2.0), gibbs_state(spec, 1.0))
        scalar_route = canonical_relative_entropy(spec, 2.0, 1.0)
        assert abs(matrix_route - scalar_route) <= 1e-12


class TestDensityMatrixValidation:
    def test_trace_enforced(self):
        with pytest.raises(ValueError, match="trace"):
            dm(np.eye(2))

    def test_negativity_rejected(self):
        with pytest.raises(ValueError, match="eigenvalue"):
            dm(np.diag([1.5, -0.5]))

    def test_non_hermitian_rejected(self):
        m = np.array([[0.5, 0.4], [0.1, 0.5]])
        with pytest.raises(ValueError, match="Hermitian"):
            dm(m)
