import numpy as np
import pytest

from mflr.errors import DataError
from mflr.pca import ReducedBasis, fit_basis, project, reconstruct


def _random_training(rng, m=40, n=12):
    return rng.standard_normal((m, n)) * rng.uniform(0.5, 2.0)


class TestFitBasis:
    def test_constant_columns_give_mean_only(self):
        col = np.array([1.0, -2.0, 3.0])
        y = np.tile(col[:, None], (1, 5))
        basis = fit_basis(y, 0.9)
        assert basis.k == 0
        assert basis.basis.shape == (3, 0)
        np.testing.assert_allclose(basis.mean, col)

    def test_hand_computed_rank_one(self):
        # Centered matrix is [[1,-1],[1,-1]], spectrum (2, 0).
        y = np.array([[1.0, -1.0], [1.0, -1.0]])
        basis = fit_basis(y, 0.9)
        assert basis.k == 1
        np.testing.assert_allclose(basis.singular_values, [2.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(np.abs(basis.basis[:, 0]), [1 / np.sqrt(2)] * 2, atol=1e-12)

    def test_energy_rule_is_strict(self):
        # The retained dimension must satisfy cumulative energy strictly
        # above epsilon: a tolerance just past the first component's share
        # forces k = 2, one just below it keeps k = 1.
        rng = np.random.default_rng(0)
        y = rng.standard_normal((8, 5))
        centered = y - y.mean(axis=1, keepdims=True)
        s = np.linalg.svd(centered, compute_uv=False)
        share = s[0] ** 2 / np.sum(s**2)
        assert fit_basis(y, share + 1e-12).k == 2
        assert fit_basis(y, share - 1e-9).k == 1

    def test_truncation_monotone_in_epsilon(self):
        rng = np.random.default_rng(1)
        y = _random_training(rng)
        ks = [fit_basis(y, eps).k for eps in (0.2, 0.5, 0.9, 0.99, 0.999, 1.0)]
        assert ks == sorted(ks)

    def test_paper_like_tolerance_keeps_k_small(self):
        # Smooth low-rank data at the protocol tolerance 0.995 retains only a
        # handful of directions even with 80 samples.
        rng = np.random.default_rng(2)
        basis_true = np.linalg.qr(rng.standard_normal((300, 7)))[0]
        states = rng.standard_normal((7, 80)) * (2.0 ** -np.arange(7))[:, None]
        y = 3.0 + basis_true @ states
        basis = fit_basis(y, 0.995)
        assert 1 <= basis.k <= 10

    def test_orthonormal_columns(self):
        rng = np.random.default_rng(3)
        basis = fit_basis(_random_training(rng), 0.99)
        gram = basis.basis.T @ basis.basis
        assert np.abs(gram - np.eye(basis.k)).max() <= 1e-10

    def test_epsilon_out_of_range(self):
        with pytest.raises(DataError):
            fit_basis(np.ones((2, 2)), 0.0)
        with pytest.raises(DataError):
            fit_basis(np.ones((2, 2)), 1.5)


class TestProjectReconstruct:
    def test_mean_projects_to_zero(self):
        rng = np.random.default_rng(4)
        y = _random_training(rng)
        basis = fit_basis(y, 0.9)
        replicated = np.tile(basis.mean[:, None], (1, 4))
        np.testing.assert_allclose(project(basis, replicated), 0.0, atol=1e-12)

    def test_data_in_span_recovers_states(self):
        rng = np.random.default_rng(5)
        basis = fit_basis(_random_training(rng), 0.95)
        c = rng.standard_normal((basis.k, 6))
        y = basis.mean[:, None] + basis.basis @ c
        np.testing.assert_allclose(project(basis, y), c, atol=1e-10)

    def test_matches_triple_loop_oracle(self):
        rng = np.random.default_rng(6)
        y_train = _random_training(rng, m=15, n=8)
        basis = fit_basis(y_train, 0.99)
        y = rng.standard_normal((15, 3))
        states = project(basis, y)
        oracle = np.zeros_like(states)
        for i in range(basis.k):
            for j in range(y.shape[1]):
                acc = 0.0
                for r in range(y.shape[0]):
                    acc += basis.basis[r, i] * (y[r, j] - basis.mean[r])
                oracle[i, j] = acc
        np.testing.assert_allclose(states, oracle, atol=1e-12)

    def test_zero_states_reconstruct_mean(self):
        rng = np.random.default_rng(7)
        basis = fit_basis(_random_training(rng), 0.9)
        out = reconstruct(basis, np.zeros((basis.k, 3)))
        np.testing.assert_allclose(out, np.tile(basis.mean[:, None], (1, 3)), atol=1e-12)

    def test_round_trip_identity_in_span(self):
        rng = np.random.default_rng(8)
        basis = fit_basis(_random_training(rng), 0.95)
        y = basis.mean[:, None] + basis.basis @ rng.standard_normal((basis.k, 5))
        np.testing.assert_allclose(reconstruct(basis, project(basis, y)), y, atol=1e-10)

    def test_project_after_reconstruct_is_identity(self):
        rng = np.random.default_rng(9)
        basis = fit_basis(_random_training(rng), 0.9)
        c = rng.standard_normal((basis.k, 4))
        np.testing.assert_allclose(project(basis, reconstruct(basis, c)), c, atol=1e-10)

    def test_training_residual_equals_discarded_energy(self):
        rng = np.random.default_rng(10)
        for trial in range(5):
            y = rng.standard_normal((30, 10)) * rng.uniform(0.1, 3.0)
            basis = fit_basis(y, 0.8)
            resid = y - reconstruct(basis, project(basis, y))
            discarded = basis.discarded_energy()
            assert abs(np.linalg.norm(resid) ** 2 - discarded) <= 1e-8 * max(discarded, 1.0)

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(11)
        basis = fit_basis(_random_training(rng), 0.9)
        with pytest.raises(DataError):
            project(basis, np.ones((basis.output_dim + 1, 2)))
        with pytest.raises(DataError):
            reconstruct(basis, np.ones((basis.k + 1, 2)))

    def test_mean_only_basis_round_trip(self):
        y = np.tile(np.array([2.0, 4.0])[:, None], (1, 3))
        basis = fit_basis(y, 0.9)
        states = project(basis, y)
        assert states.shape == (0, 3)
        np.testing.assert_allclose(reconstruct(basis, states), y, atol=1e-12)
