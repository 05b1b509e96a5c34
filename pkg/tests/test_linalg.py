import numpy as np
import pytest

from mflr.errors import DataError
from mflr.linalg import as_matrix, solve_least_squares, thin_svd


class TestThinSvd:
    def test_zero_matrix(self):
        u, s, v = thin_svd(np.zeros((2, 2)))
        np.testing.assert_allclose(s, [0.0, 0.0])
        np.testing.assert_allclose(u.T @ u, np.eye(2), atol=1e-10)
        np.testing.assert_allclose(v.T @ v, np.eye(2), atol=1e-10)

    def test_diagonal_matrix(self):
        u, s, v = thin_svd(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(s, [3.0, 1.0])
        # Signed permutation of the identity: one +-1 entry per row/column.
        for factor in (u, v):
            np.testing.assert_allclose(np.abs(factor), np.eye(2), atol=1e-12)

    def test_rank_one_hand_computed(self):
        # A^T A = [[2,-2],[-2,2]] has eigenvalues 4 and 0, so s = (2, 0).
        a = np.array([[1.0, -1.0], [1.0, -1.0]])
        u, s, v = thin_svd(a)
        np.testing.assert_allclose(s, [2.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(np.abs(u[:, 0]), [1 / np.sqrt(2)] * 2, atol=1e-12)

    def test_singular_values_sorted_nonnegative(self):
        rng = np.random.default_rng(0)
        for m, n in [(5, 3), (3, 5), (8, 8)]:
            _, s, _ = thin_svd(rng.standard_normal((m, n)))
            assert np.all(s >= 0)
            assert np.all(np.diff(s) <= 0)

    @pytest.mark.parametrize("shape", [(10, 4), (4, 10), (50, 50), (200, 120), (120, 200)])
    def test_round_trip(self, shape):
        rng = np.random.default_rng(sum(shape))
        a = rng.standard_normal(shape)
        u, s, v = thin_svd(a)
        err = np.linalg.norm(a - u @ np.diag(s) @ v.T)
        assert err <= 1e-9 * (1.0 + np.linalg.norm(a))

    def test_orthonormal_factors(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((40, 12))
        u, s, v = thin_svd(a)
        r = min(a.shape)
        assert np.abs(u.T @ u - np.eye(r)).max() <= 1e-10
        assert np.abs(v.T @ v - np.eye(r)).max() <= 1e-10

    def test_rank_deficient_does_not_fail(self):
        rng = np.random.default_rng(2)
        col = rng.standard_normal((30, 1))
        a = col @ np.ones((1, 7))
        u, s, v = thin_svd(a)
        assert s[1] <= 1e-10 * s[0]
        np.testing.assert_allclose(u @ np.diag(s) @ v.T, a, atol=1e-10)

    def test_non_finite_rejected(self):
        with pytest.raises(DataError):
            thin_svd(np.array([[1.0, np.nan]]))


class TestSolveLeastSquares:
    def test_identity_system(self):
        x = solve_least_squares(np.eye(2), np.array([[5.0], [7.0]]))
        np.testing.assert_allclose(x, [[5.0], [7.0]])

    def test_exact_line(self):
        a = np.array([[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]])
        b = np.array([[0.0], [1.0], [2.0]])
        np.testing.assert_allclose(solve_least_squares(a, b), [[0.0], [1.0]], atol=1e-12)

    def test_mean_of_inconsistent_rows(self):
        a = np.array([[1.0], [1.0]])
        b = np.array([[0.0], [2.0]])
        np.testing.assert_allclose(solve_least_squares(a, b), [[1.0]], atol=1e-12)

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n, p, k = rng.integers(2, 40), rng.integers(1, 12), rng.integers(1, 5)
            a = rng.standard_normal((n, p))
            b = rng.standard_normal((n, k))
            x = solve_least_squares(a, b)
            resid = np.linalg.norm(a.T @ (a @ x - b))
            assert resid <= 1e-8 * (1.0 + np.linalg.norm(a) * np.linalg.norm(b))

    def test_minimum_norm_on_rank_deficient(self):
        # Duplicate columns: any split of the coefficient works; the
        # minimum-norm solution shares it evenly.
        a = np.array([[1.0, 1.0], [2.0, 2.0]])
        b = np.array([[3.0], [6.0]])
        x = solve_least_squares(a, b)
        np.testing.assert_allclose(x, [[1.5], [1.5]], atol=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(DataError):
            solve_least_squares(np.eye(2), np.ones((3, 1)))


class TestAsMatrix:
    def test_rejects_inf(self):
        with pytest.raises(DataError) as info:
            as_matrix([[np.inf]])
        assert info.value.code == "non-finite"

    def test_rejects_wrong_ndim(self):
        with pytest.raises(DataError):
            as_matrix([1.0, 2.0])
