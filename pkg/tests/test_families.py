import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from glmshapley import GAUSSIAN, GEOMETRIC, LOGIT, POISSON, ZT_POISSON, get_family
from glmshapley.exceptions import ConfigError, ResponseDomainError, UnsupportedModeError

COUNT_FAMILIES = (LOGIT, POISSON, ZT_POISSON, GEOMETRIC)


def test_get_family_names_and_aliases():
    assert get_family("poisson") is POISSON
    assert get_family("poisson-log") is POISSON
    assert get_family("bernoulli-logit") is LOGIT
    assert get_family("zt-poisson-log") is ZT_POISSON
    assert get_family("gaussian-identity") is GAUSSIAN
    assert get_family(GEOMETRIC) is GEOMETRIC
    with pytest.raises(ConfigError):
        get_family("weibull")


# --------------------------------------------------------------------------
# log-density oracles from scipy.stats

def test_poisson_loglik_matches_scipy():
    rng = np.random.default_rng(0)
    mu = rng.uniform(0.2, 5.0, 50)
    y = rng.poisson(mu).astype(float)
    expected = stats.poisson.logpmf(y, mu).sum()
    assert_allclose(POISSON.loglik(y, mu), expected, rtol=1e-12)


def test_logit_loglik_matches_scipy():
    rng = np.random.default_rng(1)
    mu = rng.uniform(0.05, 0.95, 50)
    y = rng.binomial(1, mu).astype(float)
    expected = stats.bernoulli.logpmf(y, mu).sum()
    assert_allclose(LOGIT.loglik(y, mu), expected, rtol=1e-12)


def test_gaussian_loglik_matches_scipy():
    rng = np.random.default_rng(2)
    mu = rng.normal(size=50)
    y = mu + rng.normal(size=50)
    expected = stats.norm.logpdf(y, mu, 1.0).sum()
    assert_allclose(GAUSSIAN.loglik(y, mu), expected, rtol=1e-12)


def test_geometric_loglik_matches_scipy():
    # nbinom with shape 1 and success probability 1/(1+mu)
    rng = np.random.default_rng(3)
    mu = rng.uniform(0.2, 6.0, 50)
    y = (rng.geometric(1.0 / (1.0 + mu)) - 1).astype(float)
    expected = stats.nbinom.logpmf(y, 1, 1.0 / (1.0 + mu)).sum()
    assert_allclose(GEOMETRIC.loglik(y, mu), expected, rtol=1e-12)


def test_zt_poisson_loglik_matches_scipy():
    # parent poisson log-density rescaled by the positive-support mass
    rng = np.random.default_rng(4)
    mu = rng.uniform(0.3, 6.0, 50)
    y = ZT_POISSON.sample(mu, rng)
    expected = (stats.poisson.logpmf(y, mu) - np.log1p(-np.exp(-mu))).sum()
    assert_allclose(ZT_POISSON.loglik(y, mu), expected, rtol=1e-12)


def test_loglik_from_eta_consistent():
    rng = np.random.default_rng(5)
    eta = rng.uniform(-2, 2, 40)
    for fam in (GAUSSIAN, LOGIT, POISSON, ZT_POISSON, GEOMETRIC):
        mu = fam.inv_link(eta)
        y = fam.sample(mu, rng)
        assert_allclose(
            fam.loglik_from_eta(y, eta), fam.loglik(y, mu), rtol=1e-12, atol=1e-12
        )


def test_loglik_from_eta_stable_for_extreme_eta():
    eta = np.array([-800.0, -50.0, 0.0, 50.0])
    y = np.array([0.0, 0.0, 1.0, 1.0])
    ll = LOGIT.loglik_from_eta(y, eta)
    assert np.isfinite(ll)
    y = np.array([0.0, 1.0, 2.0, 3.0])
    assert np.isfinite(GEOMETRIC.loglik_from_eta(y, eta))
    assert POISSON.loglik_from_eta(y, np.array([800.0, 0.0, 0.0, 0.0])) == -np.inf


# --------------------------------------------------------------------------
# count probabilities

def test_pmf_trivial_values():
    assert_allclose(POISSON.pmf(0, 1.0), math.exp(-1.0), rtol=1e-12)
    assert ZT_POISSON.pmf(0, 1.0) == 0.0
    assert_allclose(GEOMETRIC.pmf(2, 1.0), 1.0 / 8.0, rtol=1e-12)
    assert_allclose(LOGIT.pmf(1, 0.3), 0.3)
    assert_allclose(LOGIT.pmf(0, 0.3), 0.7)


def test_pmf_outside_support_is_zero():
    assert POISSON.pmf(-1, 2.0) == 0.0
    assert POISSON.pmf(1.5, 2.0) == 0.0
    assert ZT_POISSON.pmf(0, 2.0) == 0.0
    assert GEOMETRIC.pmf(-3, 2.0) == 0.0
    assert LOGIT.pmf(2, 0.3) == 0.0


@pytest.mark.parametrize("family", [POISSON, ZT_POISSON, GEOMETRIC])
@pytest.mark.parametrize("mu", [0.3, 1.0, 4.2, 9.7])
def test_pmf_sums_to_one(family, mu):
    js = np.arange(0, 400)
    total = sum(float(family.pmf(j, mu)) for j in js)
    assert abs(total - 1.0) < 1e-9


def test_zt_pmf_is_renormalized_poisson():
    mu = 2.5
    for j in range(1, 10):
        expected = stats.poisson.pmf(j, mu) / (1.0 - math.exp(-mu))
        assert_allclose(float(ZT_POISSON.pmf(j, mu)), expected, rtol=1e-12)


# --------------------------------------------------------------------------
# saturated log-likelihood conventions

def test_poisson_saturated_direct_summation():
    # independent oracle: sum(y log y - y - log y!) over y=(1,2,3)
    y = np.array([1.0, 2.0, 3.0])
    oracle = sum(v * math.log(v) - v - math.log(math.factorial(int(v))) for v in y)
    assert_allclose(POISSON.saturated_loglik(y), oracle, rtol=1e-14)
    assert_allclose(POISSON.saturated_loglik(y), -3.8027754226637804, rtol=1e-14)


def test_poisson_saturated_handles_zero_counts():
    y = np.array([0.0, 0.0, 2.0])
    oracle = 0.0 + 0.0 + (2 * math.log(2) - 2 - math.log(2))
    assert_allclose(POISSON.saturated_loglik(y), oracle, rtol=1e-14)


def test_bernoulli_saturated_is_exactly_zero():
    y = np.array([0.0, 1.0, 1.0, 0.0])
    assert LOGIT.saturated_loglik(y) == 0.0


def test_geometric_saturated_zero_counts_contribute_zero():
    assert GEOMETRIC.saturated_loglik(np.array([0.0])) == 0.0
    y = np.array([0.0, 3.0])
    oracle = 3 * math.log(3) - 4 * math.log(4)
    assert_allclose(GEOMETRIC.saturated_loglik(y), oracle, rtol=1e-14)


def test_gaussian_saturated_constant():
    y = np.array([1.0, -2.0, 0.5])
    assert_allclose(
        GAUSSIAN.saturated_loglik(y), -1.5 * math.log(2 * math.pi), rtol=1e-14
    )


def test_zt_saturated_plugs_count_as_rate():
    y = np.array([1.0, 2.0])
    oracle = sum(
        v * math.log(v) - math.log(math.expm1(v)) - math.log(math.factorial(int(v)))
        for v in y
    )
    assert_allclose(ZT_POISSON.saturated_loglik(y), oracle, rtol=1e-14)


# --------------------------------------------------------------------------
# truncated mean, curvature, divergence helpers

def test_zt_truncated_mean_against_brute_force():
    for mu in (0.1, 0.7, 2.0, 8.0):
        js = np.arange(1, 500)
        brute = float(np.sum(js * ZT_POISSON.pmf(js, mu)))
        assert_allclose(float(ZT_POISSON.truncated_mean(mu)), brute, rtol=1e-10)


def test_zt_truncated_mean_bounds():
    mu = np.array([1e-8, 0.01, 1.0, 20.0, 700.0, 1000.0])
    m = ZT_POISSON.truncated_mean(mu)
    # strictly above mu until the correction underflows for huge mu
    assert np.all(m[mu <= 30.0] > mu[mu <= 30.0])
    assert np.all(m >= mu)
    assert np.all(m <= mu + 1.0)
    assert_allclose(float(ZT_POISSON.truncated_mean(1e-10)), 1.0, rtol=1e-9)


def test_curvature_positive_everywhere():
    rng = np.random.default_rng(6)
    mu_pos = rng.uniform(0.01, 50.0, 100)
    y_cnt = rng.poisson(3.0, 100).astype(float)
    assert np.all(POISSON.curvature_eta(y_cnt, mu_pos) > 0)
    assert np.all(ZT_POISSON.curvature_eta(y_cnt + 1, mu_pos) > 0)
    assert np.all(GEOMETRIC.curvature_eta(y_cnt, mu_pos) > 0)
    mu_unit = rng.uniform(0.01, 0.99, 100)
    assert np.all(LOGIT.curvature_eta(rng.binomial(1, 0.5, 100), mu_unit) > 0)


def test_kl_between_zero_iff_equal_and_positive():
    rng = np.random.default_rng(7)
    for fam in (GAUSSIAN, LOGIT, POISSON, ZT_POISSON, GEOMETRIC):
        if fam is LOGIT:
            mu1 = rng.uniform(0.1, 0.9, 30)
            mu2 = rng.uniform(0.1, 0.9, 30)
        elif fam is GAUSSIAN:
            mu1 = rng.normal(size=30)
            mu2 = rng.normal(size=30)
        else:
            mu1 = rng.uniform(0.2, 5.0, 30)
            mu2 = rng.uniform(0.2, 5.0, 30)
        assert fam.kl_between(mu1, mu1) == pytest.approx(0.0, abs=1e-12)
        assert fam.kl_between(mu1, mu2) > 0.0


def test_poisson_kl_between_closed_form():
    mu1 = np.array([1.0, 2.0])
    mu2 = np.array([2.0, 1.0])
    oracle = 2 * ((1 * math.log(0.5) - (1 - 2)) + (2 * math.log(2.0) - (2 - 1)))
    assert_allclose(POISSON.kl_between(mu1, mu2), oracle, rtol=1e-12)


# --------------------------------------------------------------------------
# response validation

def test_validate_y_rejections():
    with pytest.raises(ResponseDomainError):
        LOGIT.validate_y(np.array([0.0, 2.0]))
    with pytest.raises(ResponseDomainError):
        POISSON.validate_y(np.array([1.5]))
    with pytest.raises(ResponseDomainError):
        POISSON.validate_y(np.array([-1.0]))
    with pytest.raises(ResponseDomainError):
        ZT_POISSON.validate_y(np.array([0.0, 1.0]))
    with pytest.raises(ResponseDomainError):
        GEOMETRIC.validate_y(np.array([2.5]))
    with pytest.raises(ResponseDomainError):
        GAUSSIAN.validate_y(np.array([np.nan]))
    POISSON.validate_y(np.array([0.0, 3.0]))
    ZT_POISSON.validate_y(np.array([1.0, 3.0]))


def test_gaussian_has_no_pmf():
    with pytest.raises(UnsupportedModeError):
        GAUSSIAN.pmf(0, 1.0)


def test_samples_have_roughly_right_mean():
    rng = np.random.default_rng(8)
    n = 20000
    for fam, mu in ((POISSON, 2.0), (GEOMETRIC, 3.0), (LOGIT, 0.4), (GAUSSIAN, 1.0)):
        draws = fam.sample(np.full(n, mu), rng)
        assert abs(draws.mean() - mu) < 0.1
    zt = ZT_POISSON.sample(np.full(n, 2.0), rng)
    assert zt.min() >= 1.0
    assert abs(zt.mean() - float(ZT_POISSON.truncated_mean(2.0))) < 0.05
