"""Core state algebra: tensor products, partial traces, entropy, purification."""
import numpy as np
import pytest
from conftest import (
    loop_partial_trace,
    random_density_matrix,
    random_hermitian,
    random_pure_vector,
    random_unitary,
)

from discordlab import (
    DensityOperator,
    HilbertFactorization,
    InvalidStateError,
    PureState,
    partial_trace,
    purify,
    tensor_product,
    unitary_propagator,
    validate_density,
    von_neumann_entropy,
)
from discordlab.states import apply_unitary

LN2 = np.log(2.0)


def bell_state() -> PureState:
    return PureState.from_amplitudes([1, 0, 0, 1], [2, 2])


class TestFactorization:
    def test_total_dim(self):
        fact = HilbertFactorization([2, 3, 4])
        assert fact.total_dim == 24
        assert fact.n_factors == 3

    def test_rejects_dim_one(self):
        with pytest.raises(ValueError):
            HilbertFactorization([2, 1])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            HilbertFactorization([])

    def test_rejects_over_cap(self):
        with pytest.raises(ValueError):
            HilbertFactorization([2] * 13)  # 8192 > 4096


class TestValidation:
    def test_maximally_mixed_passes(self):
        report = validate_density(np.eye(2) / 2)
        assert report.passed

    def test_trace_defect_reported(self):
        report = validate_density(np.diag([1.0, 0.5]))
        assert not report.passed
        assert report.trace_defect == pytest.approx(0.5)

    def test_negative_eigenvalue_reported(self):
        report = validate_density(np.diag([1.1, -0.1]))
        assert not report.passed
        assert report.min_eigenvalue == pytest.approx(-0.1)

    def test_constructor_rejects_bad_matrix(self):
        with pytest.raises(InvalidStateError):
            DensityOperator(np.diag([1.1, -0.1]).astype(complex),
                            HilbertFactorization([2]))


class TestTensorProduct:
    def test_identity_case(self):
        half = DensityOperator.maximally_mixed([2])
        quarter = tensor_product(half, half)
        assert quarter.dims == (2, 2)
        np.testing.assert_allclose(quarter.matrix, np.eye(4) / 4)

    def test_basis_states(self):
        zero = PureState.basis_state(0, [2]).to_density()
        one = PureState.basis_state(1, [2]).to_density()
        prod = tensor_product(zero, one)
        expected = np.zeros((4, 4))
        expected[1, 1] = 1.0
        np.testing.assert_allclose(prod.matrix, expected)

    def test_diagonal_outer_product(self, rng):
        # elementwise Kronecker oracle on the diagonals
        rho_a = DensityOperator.from_diagonal([0.7, 0.3], [2])
        diag_b = rng.dirichlet([1.0] * 3)
        rho_b = DensityOperator.from_diagonal(diag_b, [3])
        prod = tensor_product(rho_a, rho_b)
        expected = np.outer([0.7, 0.3], diag_b).reshape(-1)
        np.testing.assert_allclose(np.diag(prod.matrix).real, expected, atol=1e-15)

    def test_trace_multiplies(self, rng):
        a = DensityOperator(random_density_matrix(rng, 2), HilbertFactorization([2]))
        b = DensityOperator(random_density_matrix(rng, 3), HilbertFactorization([3]))
        prod = tensor_product(a, b)
        assert np.trace(prod.matrix).real == pytest.approx(1.0, abs=1e-12)


class TestPartialTrace:
    def test_bell_marginal_is_mixed(self):
        rho = bell_state().to_density()
        marginal = partial_trace(rho, [0])
        np.testing.assert_allclose(marginal.matrix, np.eye(2) / 2, atol=1e-14)

    def test_entangled_pair_with_spectator(self):
        # tracing the environment of sum_i c_i |i i> leaves a diagonal mixture
        c = np.array([0.6, 0.8])
        pair = PureState.from_amplitudes([c[0], 0, 0, c[1]], [2, 2])
        rho_s = DensityOperator(random_density_matrix(np.random.default_rng(7), 2),
                                HilbertFactorization([2]))
        joint = tensor_product(rho_s, pair.to_density())
        reduced = partial_trace(joint, [0, 1])
        expected = np.kron(rho_s.matrix, np.diag(c ** 2))
        np.testing.assert_allclose(reduced.matrix, expected, atol=1e-14)

    def test_loop_oracle_agreement(self, rng):
        dims = [2, 3, 2]
        rho = random_density_matrix(rng, 12)
        for keep in ([0], [1], [2], [0, 2], [1, 2], [0, 1]):
            fact = HilbertFactorization(dims)
            got = partial_trace(DensityOperator(rho, fact), keep).matrix
            want = loop_partial_trace(rho, dims, keep)
            np.testing.assert_allclose(got, want, atol=1e-13)

    def test_product_recovers_marginals(self, rng):
        for _ in range(200):
            a = random_density_matrix(rng, 2)
            b = random_density_matrix(rng, 2)
            joint = DensityOperator(np.kron(a, b), HilbertFactorization([2, 2]))
            np.testing.assert_allclose(partial_trace(joint, [0]).matrix, a, atol=1e-13)
            np.testing.assert_allclose(partial_trace(joint, [1]).matrix, b, atol=1e-13)

    def test_trace_preserved(self, rng):
        rho = DensityOperator(random_density_matrix(rng, 8),
                              HilbertFactorization([2, 2, 2]))
        reduced = partial_trace(rho, [1])
        assert np.trace(reduced.matrix).real == pytest.approx(1.0, abs=1e-12)

    def test_empty_keep_rejected(self, rng):
        rho = DensityOperator.maximally_mixed([2, 2])
        with pytest.raises(ValueError):
            partial_trace(rho, [])

    def test_out_of_range_rejected(self):
        rho = DensityOperator.maximally_mixed([2, 2])
        with pytest.raises(IndexError):
            partial_trace(rho, [2])


class TestEntropy:
    def test_maximally_mixed_qubit(self):
        assert von_neumann_entropy(DensityOperator.maximally_mixed([2])) == \
            pytest.approx(LN2, abs=1e-12)

    def test_pure_state_is_zero(self, rng):
        vec = random_pure_vector(rng, 4)
        rho = PureState(vec, HilbertFactorization([4])).to_density()
        assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)

    def test_near_pure_spectrum_value(self):
        # frozen from the eigenvalue-sum oracle: -0.96 ln 0.96 - 4 (0.01 ln 0.01)
        rho = DensityOperator.from_diagonal([0.96, 0.01, 0.01, 0.01, 0.01], [5])
        assert von_neumann_entropy(rho) == pytest.approx(0.2233959221789686, abs=1e-12)

    def test_bounds(self, rng):
        for dim in (2, 3, 4):
            rho = DensityOperator(random_density_matrix(rng, dim),
                                  HilbertFactorization([dim]))
            s = von_neumann_entropy(rho)
            assert -1e-12 <= s <= np.log(dim) + 1e-12

    def test_additivity(self, rng):
        for _ in range(20):
            a = random_density_matrix(rng, 2)
            b = random_density_matrix(rng, 3)
            fact_a = HilbertFactorization([2])
            fact_b = HilbertFactorization([3])
            joint = tensor_product(DensityOperator(a, fact_a),
                                   DensityOperator(b, fact_b))
            s_joint = von_neumann_entropy(joint)
            s_sum = (von_neumann_entropy(DensityOperator(a, fact_a))
                     + von_neumann_entropy(DensityOperator(b, fact_b)))
            assert s_joint == pytest.approx(s_sum, abs=1e-9)

    def test_unitary_invariance(self, rng):
        for _ in range(20):
            rho = DensityOperator(random_density_matrix(rng, 4),
                                  HilbertFactorization([4]))
            u = random_unitary(rng, 4)
            assert von_neumann_entropy(apply_unitary(rho, u)) == \
                pytest.approx(von_neumann_entropy(rho), abs=1e-9)

    def test_schmidt_symmetry(self, rng):
        # marginals of a pure bipartite state have equal entropy
        for _ in range(20):
            vec = random_pure_vector(rng, 6)
            rho = PureState(vec, HilbertFactorization([2, 3])).to_density()
            s_a = von_neumann_entropy(partial_trace(rho, [0]))
            s_b = von_neumann_entropy(partial_trace(rho, [1]))
            assert s_a == pytest.approx(s_b, abs=1e-9)

    def test_rejects_genuinely_negative_spectrum(self):
        from discordlab.states import entropy_of_spectrum
        with pytest.raises(InvalidStateError):
            entropy_of_spectrum(np.array([1.1, -0.1]))


class TestPurify:
    def test_maximally_mixed_gives_bell(self):
        psi = purify(DensityOperator.maximally_mixed([2]))
        assert psi.factorization.dims == (2, 2)
        amplitudes = np.abs(psi.amplitudes)
        np.testing.assert_allclose(sorted(amplitudes), [0, 0, 1 / np.sqrt(2), 1 / np.sqrt(2)],
                                   atol=1e-12)

    def test_diagonal_spectral_oracle(self):
        psi = purify(DensityOperator.from_diagonal([0.7, 0.3], [2]))
        expected = np.zeros(4)
        expected[0] = np.sqrt(0.7)
        expected[3] = np.sqrt(0.3)
        np.testing.assert_allclose(np.abs(psi.amplitudes), expected, atol=1e-12)

    def test_pure_input_gets_two_dim_ancilla(self):
        rho = PureState.basis_state(1, [2]).to_density()
        psi = purify(rho)
        assert psi.factorization.dims == (2, 2)
        back = partial_trace(psi.to_density(), [0])
        np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-10)

    def test_roundtrip(self, rng):
        for dims in ([2], [3], [2, 2]):
            fact = HilbertFactorization(dims)
            rho = DensityOperator(random_density_matrix(rng, fact.total_dim), fact)
            psi = purify(rho)
            keep = list(range(fact.n_factors))
            back = partial_trace(psi.to_density(), keep)
            np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-10)


class TestPropagator:
    def test_zero_hamiltonian(self):
        np.testing.assert_allclose(unitary_propagator(np.zeros((3, 3)), 1.7), np.eye(3),
                                   atol=1e-14)

    def test_sigma_z_closed_form(self):
        sz = np.diag([1.0, -1.0])
        u = unitary_propagator(sz, np.pi / 2)
        expected = np.diag([np.exp(-1j * np.pi / 2), np.exp(1j * np.pi / 2)])
        np.testing.assert_allclose(u, expected, atol=1e-14)

    def test_group_property(self, rng):
        h = random_hermitian(rng, 4)
        u1 = unitary_propagator(h, 0.3)
        u2 = unitary_propagator(h, 1.1)
        u12 = unitary_propagator(h, 1.4)
        np.testing.assert_allclose(u1 @ u2, u12, atol=1e-12)

    def test_unitarity(self, rng):
        h = random_hermitian(rng, 5)
        u = unitary_propagator(h, 2.3)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(5), atol=1e-10)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            unitary_propagator(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)
