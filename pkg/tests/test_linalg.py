import numpy as np
import pytest

from aloglm.errors import DimensionMismatch, NotPositiveDefinite, SingularInnerMatrix
from aloglm.linalg import (
    SpdFactor,
    block_inverse_check,
    chol_factor,
    chol_solve,
    choose_path,
    quad_form_diag,
    woodbury_quad_form_diag,
)


def gauss_jordan_inverse(A):
    """Brute-force row-reduction inverse, independent of any factorization."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    aug = np.hstack([A, np.eye(n)])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] /= aug[col, col]
        for row in range(n):
            if row != col:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, n:]


class TestCholSolve:
    def test_identity(self):
        assert np.allclose(chol_solve(np.eye(3), np.eye(3)), np.eye(3))

    def test_diagonal(self):
        x = chol_solve(np.diag([2.0, 4.0]), np.array([1.0, 1.0]))
        np.testing.assert_allclose(x, [0.5, 0.25])

    def test_against_gauss_jordan(self):
        rng = np.random.default_rng(11)
        M = rng.standard_normal((8, 8))
        A = M.T @ M + np.eye(8)
        B = rng.standard_normal((8, 3))
        ref = gauss_jordan_inverse(A) @ B
        np.testing.assert_allclose(chol_solve(A, B), ref, atol=1e-9)

    def test_residual_bound(self):
        rng = np.random.default_rng(12)
        M = rng.standard_normal((20, 20))
        A = M.T @ M + 0.1 * np.eye(20)
        B = rng.standard_normal((20, 4))
        X = chol_solve(A, B)
        assert np.linalg.norm(A @ X - B) <= 1e-8 * np.linalg.norm(B)

    def test_jitter_then_failure(self):
        # indefinite matrix: jitter cannot rescue it
        with pytest.raises(NotPositiveDefinite):
            chol_solve(np.diag([1.0, -1.0]), np.ones(2))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            chol_solve(np.eye(3), np.ones(2))

    def test_factor_reconstruction_and_positive_diag(self):
        rng = np.random.default_rng(13)
        M = rng.standard_normal((10, 10))
        A = M.T @ M + np.eye(10)
        fac = chol_factor(A)
        rel = np.linalg.norm(fac.lower @ fac.lower.T - A) / np.linalg.norm(A)
        assert rel <= 1e-10
        assert np.all(np.diag(fac.lower) > 0)


class TestQuadFormDiag:
    def test_identity(self):
        fac = chol_factor(np.eye(2))
        np.testing.assert_allclose(
            quad_form_diag(np.eye(2), fac, np.ones(2)), [1.0, 1.0]
        )

    def test_ridge_on_identity_design(self):
        # A = (1 + 2*lam) I with lam = 1 and unit weights
        fac = chol_factor(np.diag([3.0, 3.0]))
        np.testing.assert_allclose(
            quad_form_diag(np.eye(2), fac, np.ones(2)), [1 / 3, 1 / 3]
        )

    def test_against_explicit_inverse(self):
        rng = np.random.default_rng(21)
        X = rng.standard_normal((5, 3))
        M = rng.standard_normal((3, 3))
        A = M.T @ M + np.eye(3)
        w = rng.random(5)
        ref = w * np.diag(X @ gauss_jordan_inverse(A) @ X.T)
        np.testing.assert_allclose(quad_form_diag(X, chol_factor(A), w), ref, atol=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            quad_form_diag(np.ones((4, 3)), chol_factor(np.eye(2)), np.ones(4))


class TestWoodbury:
    def test_matches_trivial_ridge(self):
        h = woodbury_quad_form_diag(np.eye(2), np.array([2.0, 2.0]), np.ones(2))
        np.testing.assert_allclose(h, [1 / 3, 1 / 3], atol=1e-12)

    def test_wide_matches_direct(self):
        rng = np.random.default_rng(31)
        n, p = 4, 50
        X = rng.standard_normal((n, p))
        curv = rng.random(p) + 0.5
        ell2 = rng.random(n) + 0.1
        A = np.diag(curv) + X.T @ (ell2[:, None] * X)
        direct = quad_form_diag(X, chol_factor(A), ell2)
        wb = woodbury_quad_form_diag(X, curv, ell2)
        np.testing.assert_allclose(wb, direct, rtol=1e-10, atol=1e-13)

    def test_zero_loss_curvature_gives_zero(self):
        rng = np.random.default_rng(32)
        X = rng.standard_normal((3, 6))
        h = woodbury_quad_form_diag(X, np.ones(6), np.zeros(3))
        np.testing.assert_allclose(h, np.zeros(3))

    def test_requires_positive_curvature(self):
        with pytest.raises(SingularInnerMatrix):
            woodbury_quad_form_diag(np.eye(2), np.array([1.0, 0.0]), np.ones(2))


class TestPathEquivalence:
    @pytest.mark.parametrize("n,p", [(6, 10), (10, 10), (15, 7)])
    def test_direct_vs_woodbury(self, n, p):
        rng = np.random.default_rng(100 + n + p)
        X = rng.standard_normal((n, p))
        curv = rng.random(p) + 0.2
        ell2 = rng.random(n)
        A = np.diag(curv) + X.T @ (ell2[:, None] * X)
        direct = quad_form_diag(X, chol_factor(A), ell2)
        wb = woodbury_quad_form_diag(X, curv, ell2)
        assert np.all(np.abs(direct - wb) <= 1e-10 * (1.0 + np.abs(direct)))

    def test_hat_diag_range(self):
        rng = np.random.default_rng(55)
        for trial in range(20):
            n, p = rng.integers(3, 30), rng.integers(2, 30)
            X = rng.standard_normal((n, p))
            curv = rng.random(p) + 0.05
            ell2 = rng.random(n)
            h = woodbury_quad_form_diag(X, curv, ell2)
            assert np.all(h >= -1e-9)
            assert np.all(h <= 1.0 + 1e-9)


class TestChoosePath:
    def test_active_set_wins(self):
        assert choose_path(10, 100, 1.0, True).tag == "ActiveSetS"

    def test_woodbury_when_wide_and_curved(self):
        assert choose_path(10, 100, 0.5, False).tag == "WoodburyN"

    def test_direct_otherwise(self):
        assert choose_path(100, 10, 0.5, False).tag == "DirectP"
        assert choose_path(10, 100, 0.0, False).tag == "DirectP"


class TestBlockInverse:
    def test_block_diagonal(self):
        assert block_inverse_check(np.eye(2), np.zeros((2, 2)), np.eye(2))

    def test_random_spd_partition(self):
        rng = np.random.default_rng(41)
        M = rng.standard_normal((6, 6))
        G = M.T @ M + np.eye(6)
        assert block_inverse_check(G[:2, :2], G[:2, 2:], G[2:, 2:])

    def test_indefinite_rejected(self):
        with pytest.raises(NotPositiveDefinite):
            block_inverse_check(np.eye(2), 5.0 * np.ones((2, 2)), np.eye(2))


def test_spd_factor_solve_roundtrip():
    rng = np.random.default_rng(61)
    M = rng.standard_normal((7, 7))
    A = M.T @ M + np.eye(7)
    fac = chol_factor(A)
    assert isinstance(fac, SpdFactor) and fac.dim == 7
    b = rng.standard_normal(7)
    np.testing.assert_allclose(A @ fac.solve(b), b, atol=1e-10)
