import numpy as np
import pytest

from aloglm import (
    Dataset,
    FitConfig,
    alo_smooth,
    fit,
    gaussian,
    kfold,
    l1,
    lo_exact,
    ridge,
)
from aloglm.crossval import _fold_partition
from aloglm.errors import IncompatibleMetric, InvalidConfig

TIGHT = FitConfig(kkt_tol=1e-11)


def make_ds(n=24, p=6, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    beta[:2] = [1.0, -0.5]
    y = X @ beta + 0.3 * rng.standard_normal(n)
    return Dataset(X, y, gaussian())


class TestLoExact:
    def test_three_point_closed_form(self):
        # n=3, p=1, unpenalized: each refit is 2-point least squares
        x = np.array([1.0, 2.0, -1.0])
        y = np.array([2.0, 3.0, 1.0])
        ds = Dataset(x[:, None], y, gaussian())
        rep = lo_exact(ds, gaussian(), l1(), 0.0, TIGHT, "squared_error")
        phi = []
        for i in range(3):
            keep = [j for j in range(3) if j != i]
            b = np.dot(x[keep], y[keep]) / np.dot(x[keep], x[keep])
            phi.append((y[i] - x[i] * b) ** 2)
        assert rep.estimate == pytest.approx(np.mean(phi), abs=1e-9)
        np.testing.assert_allclose(rep.per_unit, phi, atol=1e-9)
        assert rep.std_error == pytest.approx(np.std(phi, ddof=1) / np.sqrt(3), abs=1e-9)

    def test_matches_alo_on_quadratic_problem(self):
        ds = make_ds(seed=1)
        lam = 1.2
        cfg = FitConfig(kkt_tol=1e-13)
        res = fit(ds, gaussian(), ridge(), lam, cfg)
        rep = alo_smooth(ds, gaussian(), ridge(), res, lam, "squared_error")
        lo = lo_exact(ds, gaussian(), ridge(), lam, cfg, "squared_error", fitres=res)
        assert abs(rep.risk - lo.estimate) <= 1e-8 * lo.estimate

    def test_metric_mismatch(self):
        ds = make_ds()
        with pytest.raises(IncompatibleMetric):
            lo_exact(ds, gaussian(), l1(), 1.0, metric="misclassification")

    def test_needs_two_rows(self):
        ds = Dataset(np.ones((1, 1)), np.ones(1), gaussian())
        with pytest.raises(InvalidConfig):
            lo_exact(ds, gaussian(), l1(), 1.0)

    def test_permutation_invariance(self):
        ds = make_ds(seed=2)
        rng = np.random.default_rng(3)
        order = rng.permutation(ds.n)
        a = lo_exact(ds, gaussian(), l1(), 1.0, TIGHT, "squared_error")
        b = lo_exact(ds.permuted(order), gaussian(), l1(), 1.0, TIGHT, "squared_error")
        assert abs(a.estimate - b.estimate) <= 1e-9


class TestKfold:
    def test_equals_lo_when_k_is_n(self):
        ds = make_ds(seed=4)
        lo = lo_exact(ds, gaussian(), l1(), 1.0, TIGHT, "squared_error")
        kf = kfold(ds, gaussian(), l1(), 1.0, TIGHT, "squared_error", K=ds.n, seed=9)
        assert abs(kf.estimate - lo.estimate) <= 1e-12
        assert abs(kf.std_error - lo.std_error) <= 1e-12

    def test_partition_reproducible(self):
        f1 = _fold_partition(4, 2, seed=7)
        f2 = _fold_partition(4, 2, seed=7)
        for a, b in zip(f1, f2):
            np.testing.assert_array_equal(a, b)
        assert sorted(np.concatenate(f1).tolist()) == [0, 1, 2, 3]
        assert all(len(f) == 2 for f in f1)

    def test_seed_determinism(self):
        ds = make_ds(seed=5)
        a = kfold(ds, gaussian(), l1(), 1.0, TIGHT, "squared_error", K=4, seed=11)
        b = kfold(ds, gaussian(), l1(), 1.0, TIGHT, "squared_error", K=4, seed=11)
        assert a.estimate == b.estimate
        np.testing.assert_array_equal(a.per_unit, b.per_unit)

    def test_different_seed_changes_partition(self):
        f1 = _fold_partition(24, 3, seed=1)
        f2 = _fold_partition(24, 3, seed=2)
        assert any(not np.array_equal(a, b) for a, b in zip(f1, f2))

    def test_fold_count_bounds(self):
        ds = make_ds()
        with pytest.raises(InvalidConfig):
            kfold(ds, gaussian(), l1(), 1.0, K=1)
        with pytest.raises(InvalidConfig):
            kfold(ds, gaussian(), l1(), 1.0, K=ds.n + 1)

    def test_report_fields(self):
        ds = make_ds(seed=6)
        rep = kfold(ds, gaussian(), l1(), 2.0, TIGHT, "squared_error", K=4, seed=1)
        assert rep.per_unit.shape == (4,)
        assert rep.estimate > 0 and rep.std_error >= 0
        assert rep.wall_time_ms > 0
        assert not rep.degraded
