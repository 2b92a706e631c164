import numpy as np
import pytest

import aloglm._kernels as K
from aloglm import (
    Dataset,
    FitConfig,
    bridge,
    elastic_net,
    fit,
    fit_leave_one_out,
    fit_path,
    gaussian,
    l1,
    logistic,
    poisson,
    ridge,
    smoothed_l1,
)
from aloglm.errors import DegenerateProblem, InvalidConfig

TIGHT = FitConfig(kkt_tol=1e-11)


def make_gaussian(n=50, p=20, seed=0, snr=1.0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    beta[: max(1, p // 5)] = rng.standard_normal(max(1, p // 5))
    y = X @ beta + snr * rng.standard_normal(n)
    return Dataset(X, y, gaussian())


class TestFit:
    def test_ols_matches_normal_equations(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((5, 2))
        y = rng.standard_normal(5)
        ds = Dataset(X, y, gaussian())
        res = fit(ds, gaussian(), l1(), 0.0, TIGHT)
        ref = np.linalg.solve(X.T @ X, X.T @ y)
        np.testing.assert_allclose(res.beta_hat, ref, atol=1e-7)

    def test_l1_null_threshold(self):
        ds = make_gaussian(seed=2)
        lam_max = np.max(np.abs(ds.X.T @ ds.y))
        res = fit(ds, gaussian(), l1(), lam_max * 1.001)
        assert np.all(res.beta_hat == 0.0)
        assert res.active_set.size == 0

    def test_ridge_scalar_closed_form(self):
        ds = Dataset(np.array([[1.0], [1.0]]), np.array([2.0, 4.0]), gaussian())
        res = fit(ds, gaussian(), ridge(), 1.0, TIGHT)
        assert res.beta_hat[0] == pytest.approx(6.0 / 4.0, abs=1e-9)

    def test_degenerate_unpenalized(self):
        rng = np.random.default_rng(3)
        ds = Dataset(rng.standard_normal((3, 6)), rng.standard_normal(3), gaussian())
        with pytest.raises(DegenerateProblem):
            fit(ds, gaussian(), l1(), 0.0)

    def test_negative_lambda_rejected(self):
        ds = make_gaussian()
        with pytest.raises(InvalidConfig):
            fit(ds, gaussian(), l1(), -1.0)

    def test_converged_kkt_residual(self):
        ds = make_gaussian(seed=4)
        cfg = FitConfig(kkt_tol=1e-9)
        res = fit(ds, gaussian(), l1(), 1.0, cfg)
        assert res.converged
        assert res.kkt_residual <= cfg.kkt_tol

    @pytest.mark.parametrize(
        "pen", [ridge(), l1(), elastic_net(0.5), bridge(1.5), smoothed_l1(50.0)],
        ids=lambda p: p.tag,
    )
    def test_stationarity_all_penalties(self, pen):
        ds = make_gaussian(seed=5)
        res = fit(ds, gaussian(), pen, 2.0, TIGHT)
        assert res.converged
        # independent certificate: one explicit prox-gradient step must be a fixed point
        grad = ds.X.T @ (ds.X @ res.beta_hat - ds.y)
        t = 1e-3
        step = K.prox_apply(pen.code, pen.param, res.beta_hat - t * grad, t * 2.0)
        assert np.max(np.abs(step - res.beta_hat)) <= 1e-7 * (1 + np.max(np.abs(res.beta_hat)))

    def test_l1_subgradient_certificate(self):
        ds = make_gaussian(n=60, p=30, seed=6)
        lam = 3.0
        cfg = FitConfig(kkt_tol=1e-8)
        res = fit(ds, gaussian(), l1(), lam, cfg)
        assert res.converged
        g = res.subgradient_hat
        on = res.active_set
        np.testing.assert_allclose(g[on], np.sign(res.beta_hat[on]), atol=1e-6)
        off = np.setdiff1d(np.arange(ds.p), on)
        assert np.all(np.abs(g[off]) <= 1.0 + 1e-6)
        # dual feasibility on the zero coordinates, spec bound kkt_tol*lam*10
        grad = ds.X.T @ (ds.X @ res.beta_hat - ds.y)
        zero = res.beta_hat == 0.0
        assert np.max(np.abs(grad[zero]) - lam) <= cfg.kkt_tol * lam * 10

    def test_elastic_net_subgradient(self):
        ds = make_gaussian(n=80, p=30, seed=7)
        pen = elastic_net(0.6)
        res = fit(ds, gaussian(), pen, 2.0, TIGHT)
        g = res.subgradient_hat
        on = res.active_set
        np.testing.assert_allclose(g[on], np.sign(res.beta_hat[on]), atol=1e-5)

    def test_permutation_equivariance(self):
        ds = make_gaussian(n=40, p=15, seed=8)
        rng = np.random.default_rng(9)
        order = rng.permutation(ds.n)
        res = fit(ds, gaussian(), l1(), 1.5, TIGHT)
        res_p = fit(ds.permuted(order), gaussian(), l1(), 1.5, TIGHT)
        assert np.max(np.abs(res.beta_hat - res_p.beta_hat)) <= 1e-9

    @pytest.mark.parametrize("fam_name", ["logistic", "poisson"])
    def test_glm_families_converge(self, fam_name):
        rng = np.random.default_rng(10)
        n, p = 80, 20
        X = rng.standard_normal((n, p)) / np.sqrt(p)
        beta = rng.standard_normal(p)
        z = X @ beta
        if fam_name == "logistic":
            fam, y = logistic(), (rng.random(n) < 1 / (1 + np.exp(-z))).astype(float)
        else:
            fam, y = poisson(), rng.poisson(np.exp(z)).astype(float)
        ds = Dataset(X, y, fam)
        res = fit(ds, fam, l1(), 0.5)
        assert res.converged

    def test_objective_value_reported(self):
        ds = make_gaussian(seed=11)
        lam = 2.0
        res = fit(ds, gaussian(), l1(), lam, TIGHT)
        r = ds.y - ds.X @ res.beta_hat
        obj = 0.5 * r @ r + lam * np.sum(np.abs(res.beta_hat))
        assert res.objective == pytest.approx(obj, rel=1e-10)


class TestFitPath:
    def test_first_entry_above_null_threshold(self):
        ds = make_gaussian(seed=20)
        lam_max = np.max(np.abs(ds.X.T @ ds.y))
        lams = lam_max * 1.01 * np.array([1.0, 0.5, 0.25])
        out = fit_path(ds, gaussian(), l1(), lams)
        assert np.all(out[0].beta_hat == 0.0)

    def test_warm_equals_cold(self):
        ds = make_gaussian(seed=21)
        lams = np.logspace(np.log10(20), np.log10(1), 8)
        warm = fit_path(ds, gaussian(), l1(), lams, FitConfig(kkt_tol=1e-10))
        cold = fit_path(
            ds, gaussian(), l1(), lams, FitConfig(kkt_tol=1e-10, path_warm_start=False)
        )
        for a, b in zip(warm, cold):
            assert np.max(np.abs(a.beta_hat - b.beta_hat)) <= 1e-7

    def test_thirty_point_log_grid(self):
        ds = make_gaussian(seed=22)
        lams = np.logspace(2, 0, 30)  # 30 log-spaced values from 100 down to 1
        out = fit_path(ds, gaussian(), l1(), lams)
        assert len(out) == 30
        assert all(r.converged for r in out)

    def test_requires_decreasing(self):
        ds = make_gaussian()
        with pytest.raises(InvalidConfig):
            fit_path(ds, gaussian(), l1(), [1.0, 2.0])


class TestLeaveOneOut:
    def test_two_point_scalar(self):
        ds = Dataset(np.array([[2.0], [3.0]]), np.array([1.0, 6.0]), gaussian())
        res = fit_leave_one_out(ds, gaussian(), l1(), 0.0, TIGHT, i=0)
        assert res.beta_hat[0] == pytest.approx(2.0, abs=1e-8)  # y1/x1 = 6/3

    def test_matches_row_deleted_fit(self):
        ds = make_gaussian(n=30, p=8, seed=30)
        full = fit(ds, gaussian(), l1(), 1.0, TIGHT)
        res = fit_leave_one_out(ds, gaussian(), l1(), 1.0, TIGHT, i=7, warm=full.beta_hat)
        ds_del = Dataset(np.delete(ds.X, 7, 0), np.delete(ds.y, 7), gaussian())
        ref = fit(ds_del, gaussian(), l1(), 1.0, TIGHT, warm=full.beta_hat)
        np.testing.assert_array_equal(res.beta_hat, ref.beta_hat)

    def test_index_out_of_range(self):
        ds = make_gaussian()
        with pytest.raises(IndexError):
            fit_leave_one_out(ds, gaussian(), l1(), 1.0, i=ds.n)
