"""Statistical helpers: KS machinery, velocity and covariance summaries,
and the dyadic exponential sum behind the return-probability bound."""

import math

import numpy as np
import pytest
from scipy import special, stats as sps

from ppwalk.errors import DegenerateSample
from ppwalk.stats import (covariance_isotropy_test, dyadic_exp_sum,
                          exp_sum_bound_check, kolmogorov_sf, ks_normal_test,
                          summarize, velocity_estimate,
                          velocity_from_endpoints)
from ppwalk.walk import Trajectory


def test_kolmogorov_sf_matches_scipy():
    for t in np.linspace(0.3, 2.5, 23):
        assert abs(kolmogorov_sf(float(t)) - special.kolmogorov(t)) < 1e-12


def test_kolmogorov_sf_small_t_guard():
    # the alternating series has not converged below ~0.05, where the true
    # survival probability is 1 to within exp(-493)
    assert kolmogorov_sf(0.0) == 1.0
    assert kolmogorov_sf(0.049) == 1.0
    assert kolmogorov_sf(10.0) < 1e-80


def test_ks_exact_quantiles_give_minimal_distance():
    m = 1000
    sigma = 3.0
    x = sigma * sps.norm.ppf((np.arange(1, m + 1) - 0.5) / m)
    r = ks_normal_test(x, sigma)
    assert r.statistic <= 1.0 / (2 * m) + 1e-6
    assert r.p_value > 0.999
    assert not r.reject_at_1pct


def test_ks_true_normals_accept_wrong_sigma_rejects():
    rng = np.random.default_rng(42)
    x = rng.normal(0.0, 2.0, size=5000)
    ok = ks_normal_test(x, 2.0)
    assert not ok.reject_at_1pct
    bad = ks_normal_test(x, 1.0)
    assert bad.reject_at_1pct
    assert bad.p_value < 1e-6


def test_ks_constant_samples_reject():
    r = ks_normal_test(np.zeros(500), 1.0)
    assert r.statistic >= 0.5
    assert r.reject_at_1pct


def test_ks_scale_invariance():
    rng = np.random.default_rng(1)
    x = rng.normal(0.0, 1.7, size=1000)
    a = ks_normal_test(x, 1.7)
    b = ks_normal_test(x / 1.7, 1.0)
    assert abs(a.statistic - b.statistic) < 1e-12
    assert abs(a.p_value - b.p_value) < 1e-12


def test_ks_input_validation():
    with pytest.raises(ValueError):
        ks_normal_test(np.zeros(99), 1.0)
    with pytest.raises(ValueError):
        ks_normal_test(np.zeros(500), 0.0)
    with pytest.raises(ValueError):
        ks_normal_test(np.zeros(500), -1.0)


def test_velocity_estimate_single_step():
    # one +e1 step of gap 1 in d=2: velocity is exactly (1, 0)
    t = Trajectory(2, [0], [1], env_seed=0, rng_seed=0, replica=0)
    s = velocity_estimate([t])
    assert s.count == 1
    assert s.mean.tolist() == [1.0, 0.0]


def test_velocity_from_endpoints_matches_direct():
    rng = np.random.default_rng(7)
    ends = rng.integers(-50, 51, size=(400, 3))
    s = velocity_from_endpoints(ends, 100)
    assert np.allclose(s.mean, ends.mean(axis=0) / 100.0)
    assert np.allclose(s.covariance, np.cov((ends / 100.0).T, ddof=1))
    with pytest.raises(ValueError):
        velocity_from_endpoints(ends, 0)


def test_summarize_covariance_psd():
    rng = np.random.default_rng(11)
    s = summarize(rng.normal(size=(300, 4)))
    assert s.count == 300
    eig = np.linalg.eigvalsh(s.covariance)
    assert eig.min() > 0
    assert np.all(s.minimum <= s.mean)
    assert np.all(s.mean <= s.maximum)


def test_isotropy_accepts_isotropic():
    rng = np.random.default_rng(5)
    ends = rng.normal(0.0, 3.0, size=(5000, 2)) * math.sqrt(1000.0)
    r = covariance_isotropy_test(ends, 1000)
    assert not r.reject_at_1pct


def test_isotropy_rejects_axis_stretch():
    rng = np.random.default_rng(5)
    z = rng.normal(0.0, 1.0, size=(5000, 2))
    z[:, 0] *= 2.0
    r = covariance_isotropy_test(z * math.sqrt(1000.0), 1000)
    assert r.reject_at_1pct
    assert r.p_value < 1e-6


def test_isotropy_rejects_correlation():
    rng = np.random.default_rng(5)
    z = rng.normal(0.0, 1.0, size=(5000, 2))
    z[:, 1] = 0.8 * z[:, 0] + 0.6 * z[:, 1]
    r = covariance_isotropy_test(z, 1)
    assert r.reject_at_1pct


def test_isotropy_validation():
    rng = np.random.default_rng(5)
    with pytest.raises(ValueError):
        covariance_isotropy_test(rng.normal(size=(5000, 1)), 10)
    with pytest.raises(ValueError):
        covariance_isotropy_test(rng.normal(size=(99, 2)), 10)
    z = rng.normal(size=(500, 2))
    z[:, 1] = 0.0
    with pytest.raises(DegenerateSample):
        covariance_isotropy_test(z, 10)


def test_dyadic_sum_direct_oracle():
    for a, d in ((2.0, 1), (0.5, 2), (0.125, 3)):
        expect = sum(math.exp(-a * 2.0**n) * 2.0 ** (n * d)
                     for n in range(60) if a * 2.0**n < 700)
        assert abs(dyadic_exp_sum(a, d) - expect) < 1e-12 * max(1.0, expect)
    with pytest.raises(ValueError):
        dyadic_exp_sum(0.0, 1)
    with pytest.raises(ValueError):
        dyadic_exp_sum(-1.0, 2)


def test_exp_sum_report_frozen_values():
    grid = np.array([2.0**-k for k in range(11)])
    frozen = {
        1: (1.4417279619986496, 2.0178192678946045, False),
        2: (1.4428029156716833, 1.1789828504484035, True),
        3: (2.8849523513466893, 1.0321905460360556, True),
    }
    for d, (sup, ratio, stable) in frozen.items():
        r = exp_sum_bound_check(grid, d)
        assert r.monotone
        assert r.stable is stable
        assert abs(r.sup_product - sup) < 1e-10
        assert abs(r.ratio_last_first - ratio) < 1e-10
        # products are sums rescaled by a^d
        assert np.allclose(r.products, r.sums * grid**d)


def test_exp_sum_grid_validation():
    with pytest.raises(ValueError):
        exp_sum_bound_check([], 1)
    with pytest.raises(ValueError):
        exp_sum_bound_check([0.5, -0.25], 1)
    with pytest.raises(ValueError):
        exp_sum_bound_check([4.0], 1)
    with pytest.raises(ValueError):
        exp_sum_bound_check(np.ones((2, 2)), 1)
