import io

import mpmath as mp
import numpy as np
import pytest

from polopt import ColumnSchema, PolicyDataset, load_dataset
from polopt.cate_ra import ModelSpec, ate_dim, cate_histogram, estimate_cate, fit_arm
from polopt.errors import EmptyArm, TooFewUnits, UnknownVariable
from tests.conftest import NSW_MODEL


def dataset(y, t, x_cols, names):
    return PolicyDataset(
        outcome=np.asarray(y, dtype=float),
        treatment=np.asarray(t, dtype=int),
        covariates=np.column_stack([np.asarray(c, dtype=float) for c in x_cols]),
        covariate_names=tuple(names),
        ids=tuple(str(i) for i in range(len(y))),
    )


def test_constant_outcome_fit():
    ds = dataset([7, 7, 7, 7], [1, 1, 1, 1], [[1, 2, 3, 4]], ["x"])
    m = fit_arm(ds, "treated", ModelSpec(("x",)))
    assert m.intercept == pytest.approx(7.0, abs=1e-12)
    assert m.coefficients[0] == pytest.approx(0.0, abs=1e-12)
    assert m.residual_variance == pytest.approx(0.0, abs=1e-20)
    assert m.rank_ok


def test_exact_linear_fit():
    x = np.array([0.0, 1.0, 2.0, 5.0])
    ds = dataset(2 * x + 1, [0, 0, 0, 0], [x], ["x"])
    m = fit_arm(ds, "control", ModelSpec(("x",)))
    assert m.intercept == pytest.approx(1.0, abs=1e-10)
    assert m.coefficients[0] == pytest.approx(2.0, abs=1e-10)


def test_squared_term_design():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    ds = dataset(x ** 2, [1, 1, 1, 1], [x], ["x"])
    m = fit_arm(ds, "treated", ModelSpec(("x", "x^2")))
    assert m.coefficients[1] == pytest.approx(1.0, abs=1e-9)


def test_too_few_units():
    ds = dataset([1, 2], [1, 0], [[3, 4]], ["x"])
    with pytest.raises(TooFewUnits):
        fit_arm(ds, "treated", ModelSpec(("x",)))


def test_unknown_term():
    ds = dataset([1, 2, 3], [1, 1, 1], [[3, 4, 5]], ["x"])
    with pytest.raises(UnknownVariable):
        fit_arm(ds, "treated", ModelSpec(("z",)))


def test_rank_deficiency_flagged_not_fatal():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    col = list(x) + [0.0, 1.0]
    ds = dataset(list(2 * x) + [0.0, 2.0], [1, 1, 1, 1, 0, 0],
                 [col, col], ["x", "x_copy"])
    m = fit_arm(ds, "treated", ModelSpec(("x", "x_copy")))
    assert not m.rank_ok
    # minimum-norm solution still reproduces the fitted line
    design = ModelSpec(("x", "x_copy")).design_matrix(ds)[ds.treatment == 1]
    assert np.allclose(m.predict(design), 2 * x, atol=1e-9)


def test_nsw_treated_arm_matches_extended_precision_oracle(nsw):
    m = fit_arm(nsw, "treated", NSW_MODEL)
    design = NSW_MODEL.design_matrix(nsw)[nsw.treatment == 1]
    y = nsw.outcome[nsw.treatment == 1]
    with mp.workdps(50):
        Xm = mp.matrix(design.tolist())
        ym = mp.matrix(y.tolist())
        beta = mp.lu_solve(Xm.T * Xm, Xm.T * ym)
    got = np.concatenate(([m.intercept], m.coefficients))
    for i, b in enumerate(got):
        assert abs(b - float(beta[i])) <= 1e-8 * max(1.0, abs(float(beta[i])))


def test_estimate_cate_recovers_known_linear_effects():
    # potential outcomes built from known arm coefficients, no noise
    x = np.array([0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
    t = np.array([1, 0, 1, 0, 1, 0, 1, 0])
    y1 = 1.0 + 3.0 * x
    y0 = 0.5 + 1.0 * x
    y = np.where(t == 1, y1, y0)
    ds = dataset(y, t, [x], ["x"])
    est = estimate_cate(ds, ModelSpec(("x",)))
    assert np.allclose(est.tau, y1 - y0, atol=1e-8)


def test_intercept_only_collapses_to_dim():
    rng = np.random.default_rng(7)
    y = rng.normal(size=60)
    t = np.r_[np.ones(25, int), np.zeros(35, int)]
    ds = dataset(y, t, [rng.normal(size=60)], ["x"])
    est = estimate_cate(ds, ModelSpec(()))
    assert abs(est.ate_ra - est.ate_dim) <= 1e-10


def test_nsw_golden_estimates(nsw_estimates):
    # frozen from the first verified run on the pinned data file
    assert nsw_estimates.ate_dim == pytest.approx(1.7943423822, abs=1e-9)
    assert nsw_estimates.dim_se == pytest.approx(0.6709965445, abs=1e-9)
    assert nsw_estimates.ate_ra == pytest.approx(1.5447200324, abs=1e-8)
    assert nsw_estimates.ate_ra_treated == pytest.approx(1.7640058698, abs=1e-8)


def test_ate_ra_is_mean_of_tau(nsw_estimates):
    assert nsw_estimates.ate_ra == pytest.approx(float(np.mean(nsw_estimates.tau)), abs=1e-12)


def test_tau_treated_length(nsw, nsw_estimates):
    assert len(nsw_estimates.tau_treated) == nsw.n_treated


def test_ate_dim_symmetry_and_hand_value():
    ds = dataset([5, 5, 5, 5], [1, 1, 0, 0], [[0, 0, 0, 0]], ["x"])
    est, se = ate_dim(ds)
    assert est == 0.0 and se == 0.0
    ds2 = dataset([3, 1], [1, 0], [[0, 0]], ["x"])
    assert ate_dim(ds2)[0] == 2.0


def test_ate_dim_empty_arm():
    ds = dataset([1.0, 2.0], [1, 1], [[0, 0]], ["x"])
    with pytest.raises(EmptyArm):
        ate_dim(ds)


def test_outcome_scaling_scales_effects():
    rng = np.random.default_rng(11)
    x = rng.normal(size=40)
    t = rng.integers(0, 2, size=40)
    t[:3] = 1
    t[-3:] = 0
    y = rng.normal(size=40)
    ds = dataset(y, t, [x], ["x"])
    dsk = dataset(3.0 * y, t, [x], ["x"])
    a = estimate_cate(ds, ModelSpec(("x",)))
    b = estimate_cate(dsk, ModelSpec(("x",)))
    assert np.allclose(b.tau, 3.0 * a.tau, rtol=1e-10, atol=1e-10)
    assert b.ate_dim == pytest.approx(3.0 * a.ate_dim, rel=1e-12)
    assert b.ate_ra == pytest.approx(3.0 * a.ate_ra, rel=1e-10)


def test_outcome_shift_leaves_tau_unchanged():
    rng = np.random.default_rng(13)
    x = rng.normal(size=40)
    t = np.r_[np.ones(20, int), np.zeros(20, int)]
    y = rng.normal(size=40)
    a = estimate_cate(dataset(y, t, [x], ["x"]), ModelSpec(("x",)))
    b = estimate_cate(dataset(y + 100.0, t, [x], ["x"]), ModelSpec(("x",)))
    assert np.allclose(a.tau, b.tau, atol=1e-8)


def test_residuals_orthogonal_to_design(nsw):
    for arm, flag in (("treated", 1), ("control", 0)):
        m = fit_arm(nsw, arm, NSW_MODEL)
        design = NSW_MODEL.design_matrix(nsw)[nsw.treatment == flag]
        resid = nsw.outcome[nsw.treatment == flag] - m.predict(design)
        scale = np.abs(design).sum(axis=0) * np.abs(resid).max()
        dots = np.abs(design.T @ resid)
        assert (dots <= 1e-6 * np.maximum(scale, 1.0)).all()


def test_histogram_single_bin():
    est = estimate_like(np.array([1.0, 1.0, 1.0, 1.0]))
    h = cate_histogram(est, 1)
    assert h["tau_counts"] == [4]


def test_histogram_two_bins_uniform():
    h = cate_histogram(estimate_like(np.array([0.0, 1.0, 2.0, 3.0])), 2)
    assert h["tau_counts"] == [2, 2]
    assert h["bin_edges"][1] == pytest.approx(1.5)


def test_histogram_counts_sum_to_n(nsw, nsw_estimates):
    h = cate_histogram(nsw_estimates, 20)
    assert sum(h["tau_counts"]) == nsw.n
    assert sum(h["tau_treated_counts"]) == nsw.n_treated


def estimate_like(tau):
    from polopt.cate_ra import CateEstimates

    return CateEstimates(tau=tau, tau_treated=tau.copy(), ate_ra=float(np.mean(tau)),
                         ate_dim=0.0, dim_se=0.0)
