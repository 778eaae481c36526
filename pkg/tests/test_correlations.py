"""Discord engine: mutual information, classical correlations, classifications."""
import numpy as np
import pytest
from conftest import random_density_matrix, random_pure_vector, random_unitary

from discordlab import (
    DensityOperator,
    HilbertFactorization,
    PureState,
    partial_trace,
    tensor_product,
    von_neumann_entropy,
)
from discordlab.correlations import (
    InvalidCutError,
    MeasurementBasis,
    c_classicality_check,
    c_classicality_check_joint,
    classical_correlations,
    conditional_entropy,
    discord,
    discord_oracle_qubit,
    full_report,
    is_lazy,
    lii_flow,
    mutual_information,
)

LN2 = np.log(2.0)


def bell_density() -> DensityOperator:
    return PureState.from_amplitudes([1, 0, 0, 1], [2, 2]).to_density()


def classical_mixture() -> DensityOperator:
    """(|00><00| + |11><11|) / 2: perfectly classically correlated."""
    return DensityOperator.from_diagonal([0.5, 0.0, 0.0, 0.5], [2, 2])


def random_two_qubit_product(rng) -> DensityOperator:
    a = DensityOperator(random_density_matrix(rng, 2), HilbertFactorization([2]))
    b = DensityOperator(random_density_matrix(rng, 2), HilbertFactorization([2]))
    return tensor_product(a, b)


CUT = ([0], [1])


class TestMeasurementBasis:
    def test_computational_is_complete(self):
        basis = MeasurementBasis.computational(3)
        basis.validate()
        total = sum(basis.projectors)
        np.testing.assert_allclose(total, np.eye(3), atol=1e-12)

    def test_bloch_angles_orthonormal(self, rng):
        for _ in range(10):
            theta = rng.uniform(0, np.pi)
            phi = rng.uniform(0, 2 * np.pi)
            basis = MeasurementBasis.from_bloch_angles(theta, phi)
            basis.validate()
            p0, p1 = basis.projectors
            np.testing.assert_allclose(p0 @ p1, np.zeros((2, 2)), atol=1e-12)
            np.testing.assert_allclose(p0 @ p0, p0, atol=1e-12)

    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            MeasurementBasis(np.array([[1, 1], [0, 0]], dtype=complex)).validate()


class TestMutualInformation:
    def test_product_state_is_zero(self, rng):
        rho = random_two_qubit_product(rng)
        assert mutual_information(rho, CUT) == pytest.approx(0.0, abs=1e-12)

    def test_bell_state(self):
        assert mutual_information(bell_density(), CUT) == pytest.approx(2 * LN2, abs=1e-12)

    def test_classical_mixture(self):
        assert mutual_information(classical_mixture(), CUT) == pytest.approx(LN2, abs=1e-12)

    def test_invalid_cut(self):
        with pytest.raises(InvalidCutError):
            mutual_information(bell_density(), ([0], [0, 1]))
        with pytest.raises(InvalidCutError):
            mutual_information(bell_density(), ([0], []))


class TestConditionalEntropy:
    def test_product_state_any_basis(self, rng):
        rho = random_two_qubit_product(rng)
        s_a = von_neumann_entropy(partial_trace(rho, [0]))
        for _ in range(5):
            basis = MeasurementBasis(random_unitary(rng, 2))
            ce = conditional_entropy(rho, CUT, basis, measured="right")
            assert ce == pytest.approx(s_a, abs=1e-11)

    def test_bell_computational_collapses(self):
        ce = conditional_entropy(bell_density(), CUT,
                                 MeasurementBasis.computational(2))
        assert ce == pytest.approx(0.0, abs=1e-12)

    def test_werner_mixture_matches_grid_oracle(self):
        # 128x128 Bloch-angle grid oracle pinned against a tilted basis value
        bell = bell_density().matrix
        rho = DensityOperator(0.7 * bell + 0.3 * np.eye(4) / 4,
                              HilbertFactorization([2, 2]))
        tilted = MeasurementBasis.from_bloch_angles(0.9, 1.3)
        ce = conditional_entropy(rho, CUT, tilted)
        # Werner states are isotropic: every rank-1 basis gives the same value,
        # so the grid minimum must match the tilted-basis value.
        from discordlab.correlations import _bloch_vectors
        from discordlab import kernels
        thetas = np.linspace(0, np.pi, 128)
        phis = np.linspace(0, 2 * np.pi, 128, endpoint=False)
        tt, pp = np.meshgrid(thetas, phis, indexing="ij")
        values = kernels.conditional_entropy_batch(
            np.ascontiguousarray(rho.matrix.reshape(2, 2, 2, 2)),
            _bloch_vectors(tt.ravel(), pp.ravel()))
        assert ce == pytest.approx(float(values.min()), abs=1e-10)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            conditional_entropy(bell_density(), CUT, MeasurementBasis.computational(3))


class TestClassicalCorrelations:
    def test_product_state_zero(self, rng):
        rho = random_two_qubit_product(rng)
        j, _ = classical_correlations(rho, CUT)
        assert abs(j) < 1e-9

    def test_classical_mixture_optimal_basis(self):
        j, basis = classical_correlations(classical_mixture(), CUT)
        assert j == pytest.approx(LN2, abs=1e-9)
        # optimal basis is computational: projectors diagonal
        for proj in basis.projectors:
            assert abs(proj[0, 1]) < 1e-4

    def test_bell_state(self):
        j, _ = classical_correlations(bell_density(), CUT)
        assert j == pytest.approx(LN2, abs=1e-9)

    def test_achieved_by_returned_basis(self, rng):
        rho = DensityOperator(random_density_matrix(rng, 4),
                              HilbertFactorization([2, 2]))
        j, basis = classical_correlations(rho, CUT)
        s_a = von_neumann_entropy(partial_trace(rho, [0]))
        ce = conditional_entropy(rho, CUT, basis)
        assert j == pytest.approx(s_a - ce, abs=1e-12)

    def test_j_bounds(self, rng):
        for _ in range(20):
            rho = DensityOperator(random_density_matrix(rng, 4),
                                  HilbertFactorization([2, 2]))
            j, _ = classical_correlations(rho, CUT)
            s_a = von_neumann_entropy(partial_trace(rho, [0]))
            s_b = von_neumann_entropy(partial_trace(rho, [1]))
            assert -1e-7 <= j <= min(s_a, s_b) + 1e-7

    def test_qutrit_measured_side_pure_state(self, rng):
        # restart-path accuracy: for a pure state the discord equals the
        # marginal entropy whichever side is measured, including dim > 2
        vec = random_pure_vector(rng, 6)
        rho = PureState(vec, HilbertFactorization([3, 2])).to_density()
        s_marginal = von_neumann_entropy(partial_trace(rho, [1]))
        d = discord(rho, ([0], [1]), measured="left")
        assert d == pytest.approx(s_marginal, abs=2e-4)

    def test_optimizer_cap(self):
        rho = DensityOperator.maximally_mixed([2, 32])
        with pytest.raises(ValueError):
            classical_correlations(rho, ([0], [1]), measured="right")


class TestDiscord:
    def test_product_classification(self, rng):
        rho = random_two_qubit_product(rng)
        report = full_report(rho, CUT)
        assert report.classification == "product"
        assert abs(report.d_left) < 1e-7
        assert abs(report.d_right) < 1e-7

    def test_cc_classification(self):
        # weights not of product form: correlated but classical
        rho = DensityOperator.from_diagonal([0.5, 0.2, 0.0, 0.3], [2, 2])
        report = full_report(rho, CUT)
        assert report.classification == "CC"
        assert report.mutual_info > 1e-3

    def test_bell_discord_both_ways(self):
        report = full_report(bell_density(), CUT)
        assert report.d_left == pytest.approx(LN2, abs=1e-6)
        assert report.d_right == pytest.approx(LN2, abs=1e-6)
        assert report.classification == "discordant"

    def test_decomposition_identity(self, rng):
        for _ in range(10):
            rho = DensityOperator(random_density_matrix(rng, 4),
                                  HilbertFactorization([2, 2]))
            report = full_report(rho, CUT)
            assert report.d_left + report.j_left == pytest.approx(
                mutual_information(rho, CUT), abs=1e-7)
            assert report.d_right + report.j_right == pytest.approx(
                report.mutual_info, abs=1e-7)

    def test_nonnegativity(self, rng):
        for _ in range(500):
            rho = DensityOperator(random_density_matrix(rng, 4),
                                  HilbertFactorization([2, 2]))
            report = full_report(rho, CUT)
            assert report.d_left >= -1e-7
            assert report.d_right >= -1e-7
            assert report.j_left >= -1e-7
            assert report.j_right >= -1e-7

    def test_pure_state_discord_is_marginal_entropy(self, rng):
        for _ in range(10):
            vec = random_pure_vector(rng, 4)
            rho = PureState(vec, HilbertFactorization([2, 2])).to_density()
            s_marginal = von_neumann_entropy(partial_trace(rho, [0]))
            report = full_report(rho, CUT)
            assert report.d_left == pytest.approx(s_marginal, abs=2e-4)
            assert report.d_right == pytest.approx(s_marginal, abs=2e-4)

    def test_zero_discord_iff_product_for_pure(self, rng):
        for _ in range(20):
            vec = random_pure_vector(rng, 4)
            rho = PureState(vec, HilbertFactorization([2, 2])).to_density()
            schmidt = np.linalg.svd(vec.reshape(2, 2), compute_uv=False)
            rank_one = schmidt[1] < 1e-8
            d = discord(rho, CUT)
            assert (d < 1e-7) == rank_one

    def test_report_serializes_to_json(self, rng):
        from discordlab.serialize import matrix_from_json
        rho = DensityOperator(random_density_matrix(rng, 4),
                              HilbertFactorization([2, 2]))
        report = full_report(rho, CUT)
        payload = report.to_jsonable()
        assert set(payload) == {"mutual_info", "j_left", "j_right", "d_left",
                                "d_right", "optimal_basis_left",
                                "optimal_basis_right", "classification", "seed"}
        recovered = matrix_from_json(payload["optimal_basis_right"])
        np.testing.assert_allclose(recovered, report.optimal_basis_right.vectors,
                                   atol=0)

    def test_local_unitary_invariance(self, rng):
        for _ in range(10):
            rho = DensityOperator(random_density_matrix(rng, 4),
                                  HilbertFactorization([2, 2]))
            u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
            rotated = DensityOperator(u @ rho.matrix @ u.conj().T,
                                      HilbertFactorization([2, 2]))
            assert discord(rho, CUT) == pytest.approx(discord(rotated, CUT), abs=2e-4)


class TestGridOracle:
    def test_product_state(self, rng):
        rho = random_two_qubit_product(rng)
        assert discord_oracle_qubit(rho, CUT) == pytest.approx(0.0, abs=1e-9)

    def test_bell_state_converges(self):
        assert discord_oracle_qubit(bell_density(), CUT, grid_n=256) == \
            pytest.approx(LN2, abs=1e-4)

    def test_optimizer_dominates_oracle(self, rng):
        # the optimizer must never report a worse infimum than a sampled basis
        for _ in range(10):
            rho = DensityOperator(random_density_matrix(rng, 4),
                                  HilbertFactorization([2, 2]))
            d_opt = discord(rho, CUT)
            d_oracle = discord_oracle_qubit(rho, CUT, grid_n=64)
            assert d_opt <= d_oracle + 1e-6

    def test_rejects_non_qubit_side(self):
        rho = DensityOperator.maximally_mixed([2, 3])
        with pytest.raises(ValueError):
            discord_oracle_qubit(rho, ([0], [1]))


class TestLiiFlow:
    def test_fully_product_tripartite(self, rng):
        rho = tensor_product(
            tensor_product(
                DensityOperator(random_density_matrix(rng, 2), HilbertFactorization([2])),
                DensityOperator(random_density_matrix(rng, 2), HilbertFactorization([2]))),
            DensityOperator(random_density_matrix(rng, 2), HilbertFactorization([2])))
        result = lii_flow(rho)
        assert result.total == pytest.approx(0.0, abs=1e-7)
        np.testing.assert_allclose(result.terms, 0.0, atol=1e-7)

    def test_locked_pair_state(self, rng):
        # rho_S (x) |Psi><Psi| with |Psi> entangled on the last two factors:
        # information flows only inside that pair
        c = np.array([np.sqrt(0.7), np.sqrt(0.3)])
        pair = PureState.from_amplitudes([c[0], 0, 0, c[1]], [2, 2])
        rho_s = DensityOperator(random_density_matrix(rng, 2), HilbertFactorization([2]))
        rho = tensor_product(rho_s, pair.to_density())
        s_e = -float(np.sum(c ** 2 * np.log(c ** 2)))
        result = lii_flow(rho)
        assert result.terms[0] == pytest.approx(0.0, abs=2e-4)
        assert result.terms[1] == pytest.approx(s_e, abs=2e-4)
        assert result.terms[2] == pytest.approx(0.0, abs=2e-4)
        assert result.total == pytest.approx(s_e, abs=4e-4)

    def test_requires_three_groups(self):
        rho = DensityOperator.maximally_mixed([2, 2])
        with pytest.raises(InvalidCutError):
            lii_flow(rho)


class TestLazy:
    def test_product_state_lazy_both_sides(self, rng):
        rho = random_two_qubit_product(rng)
        for group in ([0], [1]):
            lazy, norm = is_lazy(rho, group)
            assert lazy
            assert norm < 1e-12

    def test_bell_state_lazy(self):
        # marginals are I/2, which commutes with everything
        for group in ([0], [1]):
            lazy, _ = is_lazy(bell_density(), group)
            assert lazy

    def test_correlated_mixture_not_lazy(self):
        plus = np.array([1, 1]) / np.sqrt(2)
        zero = np.array([1, 0])
        one = np.array([0, 1])
        rho = 0.5 * np.kron(np.outer(plus, plus), np.outer(zero, zero)) \
            + 0.5 * np.kron(np.outer(zero, zero), np.outer(one, one))
        state = DensityOperator(rho.astype(complex), HilbertFactorization([2, 2]))
        lazy, norm = is_lazy(state, [0])
        assert not lazy
        assert norm > 1e-3

    def test_rejects_full_group(self):
        with pytest.raises(ValueError):
            is_lazy(bell_density(), [0, 1])


class TestCClassicality:
    def test_product_pair_always_passes(self, rng):
        for _ in range(10):
            rho_a = DensityOperator(random_density_matrix(rng, 2),
                                    HilbertFactorization([2]))
            rho_b = DensityOperator(random_density_matrix(rng, 3),
                                    HilbertFactorization([3]))
            ok, norm = c_classicality_check(rho_a, rho_b)
            assert ok
            assert norm < 1e-12

    def test_identity_side(self, rng):
        rho_b = DensityOperator(random_density_matrix(rng, 2), HilbertFactorization([2]))
        ok, _ = c_classicality_check(DensityOperator.maximally_mixed([2]), rho_b)
        assert ok

    def test_correlated_joint_state_can_fail(self):
        # |+>|0> mixed with |0>|1>: conditioning on |0>_B picks out |+><+|-ish
        # block that fails to commute with the A marginal
        plus = np.array([1, 1]) / np.sqrt(2)
        zero = np.array([1, 0])
        one = np.array([0, 1])
        rho = 0.5 * np.kron(np.outer(plus, plus), np.outer(zero, zero)) \
            + 0.5 * np.kron(np.outer(zero, zero), np.outer(one, one))
        state = DensityOperator(rho.astype(complex), HilbertFactorization([2, 2]))
        ok, norm = c_classicality_check_joint(state, CUT)
        assert not ok
        assert norm > 1e-3

    def test_zero_probability_conditioning_rejected(self):
        rho_a = DensityOperator.maximally_mixed([2])
        rho_b = DensityOperator.from_diagonal([0.0, 1.0], [2])
        with pytest.raises(ValueError):
            c_classicality_check(rho_a, rho_b)
