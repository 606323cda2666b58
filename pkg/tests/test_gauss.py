import math

import numpy as np
import pytest

from tlg.gauss import (
    GaussianVector, bridge_cov, bridge_max_stats, bridge_pair_cov, bridge_pair_mc, cell_maxima,
    condition, factor, harmonic, max_bound_check, sample, sample_bridge_grid,
)


def test_condition_bivariate_formula():
    gv = GaussianVector(["x", "y"], np.array([1.0, -1.0]), np.array([[2.0, 0.6], [0.6, 1.0]]))
    c = condition(gv, {"y": 0.5})
    assert c.mean[0] == pytest.approx(1.0 + 0.6 * 1.5)
    assert c.var("x") == pytest.approx(2.0 - 0.36)


def test_condition_singular_block_consistent_and_impossible():
    cov = np.array([[1.0, 1.0, 0.5], [1.0, 1.0, 0.5], [0.5, 0.5, 1.0]])
    gv = GaussianVector(["a", "b", "c"], np.zeros(3), cov)
    c = condition(gv, {"a": 0.4, "b": 0.4})
    assert c.mean[0] == pytest.approx(0.2)
    with pytest.raises(ValueError):
        condition(gv, {"a": 0.4, "b": -0.4})


def test_condition_empty_is_copy():
    gv = GaussianVector(["a"], np.zeros(1), np.eye(1))
    assert condition(gv, {}).var("a") == 1.0


def test_factor_reproduces_and_rejects():
    cov = np.array([[2.0, 1.0], [1.0, 1.0]])
    f = factor(cov)
    assert np.allclose(f @ f.T, cov)
    with pytest.raises(ValueError):
        factor(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(ValueError):
        factor(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_factor_singular_ok():
    f = factor(np.ones((3, 3)))
    assert np.allclose(f @ f.T, np.ones((3, 3)))


def test_sample_moments():
    gv = GaussianVector(["a", "b"], np.array([0.0, 3.0]), np.array([[1.0, 0.5], [0.5, 2.0]]))
    x = sample(gv, 4, 200000)
    assert np.allclose(x.mean(axis=0), gv.mean, atol=0.02)
    assert np.allclose(np.cov(x.T), gv.cov, atol=0.03)


def test_bridge_cov_brownian():
    # (p - s)(u - q)/(u - s) for p <= q
    assert bridge_cov("brownian", 1.0, 3.0, 1.5, 2.5) == pytest.approx(0.5 * 0.5 / 2)
    assert bridge_cov("brownian", 0.0, 1.0, 0.0, 0.5) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        bridge_cov("brownian", 0.0, 1.0, 0.5, 1.5)


def test_bridge_pair_values():
    assert bridge_pair_cov(0.0, 1.0, 0.5, 0.5) == pytest.approx(0.25)
    # s1 = 1/5, s2 = 1, tau = 3/5, 4/5: 1/5 + (2/5)(3/5)/(4/5) = 1/5 + 3/10 = 1/2
    assert bridge_pair_cov(0.2, 1.0, 0.6, 0.8) == pytest.approx(0.5)


def test_bridge_pair_mc_agrees():
    r = bridge_pair_mc(0.2, 1.0, 0.6, 0.8, 200000, 1)
    assert abs(r["mc"] - r["exact"]) < 4 * r["se"]


def test_bridge_grid_pinned_and_variance():
    b = sample_bridge_grid(40000, 8, 2)
    assert np.all(b[:, 0] == 0) and np.allclose(b[:, -1], 0)
    assert b[:, 4].var() == pytest.approx(0.25, rel=0.03)


def test_cell_maxima_tail():
    # P(max of bridge 0 -> 0 on [0, 1] > beta) = exp(-2 beta^2)
    rng = np.random.default_rng(5)
    u = 1.0 - rng.random(200000)
    z = np.zeros_like(u)
    m = cell_maxima(z, z, 1.0, u)
    for beta in (0.5, 1.0):
        assert (m > beta).mean() == pytest.approx(math.exp(-2 * beta**2), abs=0.004)


def test_cell_maxima_at_least_endpoints():
    rng = np.random.default_rng(6)
    a, b = rng.standard_normal(1000), rng.standard_normal(1000)
    m = cell_maxima(a, b, 0.1, 1.0 - rng.random(1000))
    assert np.all(m >= np.maximum(a, b) - 1e-15)


def test_harmonic():
    assert harmonic(1) == 1.0
    assert harmonic(4) == pytest.approx(25 / 12)


def test_bridge_max_stats_single_bridge():
    # P(M > b) = exp(-2 b^2), so E M^2 = int 2b exp(-2 b^2) db = 1/2
    r = bridge_max_stats(1, 100000, 3)
    assert abs(r["mean_M2"] - 0.5) < 4 * r["se_M2"]
    assert abs(r["tail"] - r["tail_exact"]) < 4 * r["tail_se"]


def test_grid_method_biased_low():
    e = bridge_max_stats(4, 20000, 7, m=16, method="exact")
    g = bridge_max_stats(4, 20000, 7, m=16, method="grid")
    assert g["mean_M"] < e["mean_M"]


def test_max_bound_independent_normals():
    r = max_bound_check([1.0] * 8, reps=20000)
    assert r["ok_abs"] and r["ok_sq"]


def test_max_bound_rejects_negative_sigma():
    with pytest.raises(ValueError):
        max_bound_check([1.0, -1.0])
