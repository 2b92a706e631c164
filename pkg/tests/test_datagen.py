import numpy as np
import pytest

from aloglm import (
    Covariance,
    DesignSpec,
    TruthSpec,
    covariance,
    gaussian,
    gen_beta,
    gen_design,
    gen_response,
    logistic,
    oracle_linear_risk,
    poisson,
    pseudo_huber,
)
from aloglm.errors import (
    DimensionMismatch,
    InvalidConfig,
    InvalidCorrelation,
    UnsupportedFamily,
)


class TestCovariance:
    def test_toeplitz_entries(self):
        cov = Covariance("toeplitz", 0.9, 3)
        ref = np.array([[1.0, 0.9, 0.81], [0.9, 1.0, 0.9], [0.81, 0.9, 1.0]])
        np.testing.assert_allclose(cov.dense(), ref)

    def test_spiked_zero_rho_is_identity(self):
        cov = Covariance("spiked", 0.0, 4)
        np.testing.assert_allclose(cov.dense(), np.eye(4))

    def test_quad_form_matches_dense(self):
        rng = np.random.default_rng(1)
        for structure, rho in (("iid", 0.0), ("spiked", 0.4), ("toeplitz", 0.7)):
            cov = Covariance(structure, rho, 20)
            v = rng.standard_normal(20)
            v[rng.random(20) < 0.5] = 0.0
            assert cov.base_quad_form(v) == pytest.approx(v @ cov.dense() @ v)

    def test_scaling_invariant(self):
        spec = DesignSpec(n=10, p=30, structure="spiked", rho=0.5)
        beta = gen_beta(TruthSpec(k=5, seed=3), 30)
        cov = covariance(spec, beta)
        assert cov.quad_form(beta) == pytest.approx(1.0, abs=1e-12)

    def test_positive_definite_check(self):
        for structure, rho in (("spiked", 0.5), ("toeplitz", 0.9)):
            spec = DesignSpec(n=5, p=100, structure=structure, rho=rho,
                              scale_to_unit_signal=False)
            cov = covariance(spec)
            w = np.linalg.eigvalsh(cov.dense())
            assert w[0] > 0

    def test_invalid_correlations(self):
        with pytest.raises(InvalidCorrelation):
            DesignSpec(n=5, p=5, structure="spiked", rho=1.0)
        with pytest.raises(InvalidCorrelation):
            DesignSpec(n=5, p=5, structure="toeplitz", rho=0.0)


class TestGenBeta:
    def test_fixed_values(self):
        beta = gen_beta(TruthSpec(k=50, value_law="fixed:0.3333333333333333", seed=0), 1000)
        nz = beta[beta != 0]
        assert nz.size == 50
        np.testing.assert_allclose(nz, 1.0 / 3.0)

    def test_laplace_mean_absolute(self):
        # unit-variance Laplace has E|Z| = 1/sqrt(2)
        beta = gen_beta(TruthSpec(k=100000, value_law="laplace", seed=1), 100000)
        assert np.mean(np.abs(beta)) == pytest.approx(1 / np.sqrt(2), rel=0.02)

    def test_dense_truth(self):
        beta = gen_beta(TruthSpec(k=20, seed=2), 20)
        assert np.all(beta != 0)

    def test_k_exceeds_p(self):
        with pytest.raises(InvalidConfig):
            gen_beta(TruthSpec(k=30, seed=0), 20)

    def test_determinism(self):
        a = gen_beta(TruthSpec(k=5, seed=9), 40)
        b = gen_beta(TruthSpec(k=5, seed=9), 40)
        np.testing.assert_array_equal(a, b)


class TestGenDesign:
    def test_empirical_covariance(self):
        spec = DesignSpec(n=20000, p=5, structure="toeplitz", rho=0.6)
        beta = gen_beta(TruthSpec(k=5, seed=4), 5)
        X = gen_design(spec, beta, seed=5)
        emp = X.T @ X / spec.n
        ref = covariance(spec, beta).dense()
        assert np.max(np.abs(emp - ref)) <= 0.02

    def test_spiked_empirical_covariance(self):
        spec = DesignSpec(n=20000, p=5, structure="spiked", rho=0.5,
                          scale_to_unit_signal=False)
        X = gen_design(spec, None, seed=6)
        emp = X.T @ X / spec.n
        ref = covariance(spec).dense()
        assert np.max(np.abs(emp - ref)) <= 0.03

    def test_determinism(self):
        spec = DesignSpec(n=50, p=10, structure="iid")
        beta = gen_beta(TruthSpec(k=3, seed=7), 10)
        np.testing.assert_array_equal(
            gen_design(spec, beta, seed=8), gen_design(spec, beta, seed=8)
        )

    def test_unit_signal_variance(self):
        spec = DesignSpec(n=50000, p=12, structure="toeplitz", rho=0.9)
        beta = gen_beta(TruthSpec(k=4, seed=10), 12)
        X = gen_design(spec, beta, seed=11)
        assert np.var(X @ beta) == pytest.approx(1.0, rel=0.05)


class TestGenResponse:
    def test_gaussian_zero_noise(self):
        rng = np.random.default_rng(12)
        X = rng.standard_normal((30, 4))
        beta = rng.standard_normal(4)
        y = gen_response(gaussian(), X, beta, sigma=0.0, seed=13)
        np.testing.assert_allclose(y, X @ beta)

    def test_logistic_balanced_at_zero(self):
        X = np.zeros((100000, 2))
        y = gen_response(logistic(), X, np.ones(2), sigma=0.0, seed=14)
        assert np.mean(y) == pytest.approx(0.5, abs=0.01)

    def test_poisson_unit_rate_at_zero(self):
        X = np.zeros((100000, 2))
        y = gen_response(poisson(), X, np.ones(2), sigma=0.0, seed=15)
        assert np.mean(y) == pytest.approx(1.0, abs=0.02)

    def test_unsupported_family(self):
        with pytest.raises(UnsupportedFamily):
            gen_response(pseudo_huber(1.0), np.eye(2), np.ones(2), 1.0, 0)

    def test_determinism(self):
        rng = np.random.default_rng(16)
        X = rng.standard_normal((20, 3))
        beta = np.ones(3) * 0.2
        a = gen_response(poisson(), X, beta, 0.0, seed=17)
        b = gen_response(poisson(), X, beta, 0.0, seed=17)
        np.testing.assert_array_equal(a, b)


class TestOracleRisk:
    def test_truth_recovers_sigma_squared(self):
        S = np.eye(4)
        beta = np.ones(4)
        assert oracle_linear_risk(S, beta, beta, 1.5) == pytest.approx(1.5**2)

    def test_unit_shift(self):
        S = np.eye(3)
        bh = np.array([1.0, 0.0, 0.0])
        assert oracle_linear_risk(S, bh, np.zeros(3), 2.0) == pytest.approx(5.0)

    def test_against_monte_carlo(self):
        rng = np.random.default_rng(18)
        p = 6
        spec = DesignSpec(n=1, p=p, structure="toeplitz", rho=0.5,
                          scale_to_unit_signal=False)
        cov = covariance(spec)
        bh = rng.standard_normal(p) * 0.3
        bs = rng.standard_normal(p) * 0.3
        sigma = 1.0
        ref = oracle_linear_risk(cov, bh, bs, sigma)
        big = DesignSpec(n=1_000_000, p=p, structure="toeplitz", rho=0.5,
                         scale_to_unit_signal=False)
        Xn = gen_design(big, None, seed=19)
        yn = Xn @ bs + sigma * rng.standard_normal(Xn.shape[0])
        mc = np.mean((yn - Xn @ bh) ** 2)
        assert mc == pytest.approx(ref, rel=0.01)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            oracle_linear_risk(np.eye(3), np.ones(2), np.ones(2), 1.0)
