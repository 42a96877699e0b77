"""Response families for the supported regression models.

Each family bundles the inverse link, the log-likelihood, the saturated
log-likelihood convention, and the per-observation score and curvature on
the linear predictor scale.  The Newton fitter in ``fitting`` works purely
through this interface.

Conventions
-----------
* ``0 * log(0)`` is treated as 0 throughout (``scipy.special.xlogy``).
* The saturated log-likelihood is the log-likelihood evaluated at
  ``mu = y``.  For the zero-truncated Poisson this plugs the observed
  count in as the *rate* of the underlying Poisson, which is the standard
  convention for its deviance-style fit measures.
* The Gaussian family uses unit dispersion, which makes its deviance the
  residual sum of squares and its Kullback-Leibler R-squared the classical
  R-squared exactly.
"""

import numpy as np
from scipy import special, stats

from .exceptions import (
    DegenerateRunError,
    ResponseDomainError,
    UnsupportedModeError,
)

LOG_2PI = np.log(2.0 * np.pi)


def _log_expm1(x):
    """log(e^x - 1), stable in both tails (x > 0)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < 33.0
    out[small] = np.log(np.expm1(x[small]))
    out[~small] = x[~small] + np.log1p(-np.exp(-x[~small]))
    return out


def _check_integer(y, name, minimum):
    if not np.all(np.isfinite(y)):
        raise ResponseDomainError(f"{name} response must be finite")
    if np.any(y != np.floor(y)):
        raise ResponseDomainError(f"{name} response must be integer valued")
    if np.any(y < minimum):
        raise ResponseDomainError(f"{name} response must be >= {minimum}")


class Family:
    """Interface shared by all response families.

    ``score_eta`` and ``curvature_eta`` are the first derivative and the
    negated second derivative of the per-observation log-likelihood with
    respect to the linear predictor; the curvature uses the observed
    information, which is positive everywhere for all five families, so
    the log-likelihood is globally concave in the coefficients.
    """

    name = ""
    is_count = False

    def validate_y(self, y):
        raise NotImplementedError

    def inv_link(self, eta):
        raise NotImplementedError

    def link(self, mu):
        raise NotImplementedError

    def mu_interior(self, mu):
        """True when every entry of mu lies strictly inside the mean domain."""
        raise NotImplementedError

    def loglik(self, y, mu):
        raise NotImplementedError

    def loglik_from_eta(self, y, eta):
        return self.loglik(y, self.inv_link(eta))

    def saturated_loglik(self, y):
        return self.loglik(y, np.asarray(y, dtype=float))

    def score_eta(self, y, mu):
        raise NotImplementedError

    def curvature_eta(self, y, mu):
        raise NotImplementedError

    def null_eta(self, y):
        """Linear predictor of the intercept-only maximum likelihood fit."""
        raise NotImplementedError

    def pmf(self, j, mu):
        """Probability of count value j under mean parameter mu."""
        raise UnsupportedModeError(f"{self.name} has no count probability function")

    def kl_between(self, mu1, mu2):
        """Kullback-Leibler divergence 2*E_1[log f_1/f_2] summed over observations."""
        raise NotImplementedError

    def sample(self, mu, rng):
        raise NotImplementedError

    def __repr__(self):
        return f"<family {self.name}>"


class GaussianIdentity(Family):
    """Gaussian response, identity link, unit dispersion.

    y | x ~ N(x'beta, 1).  With this convention the deviance equals the
    residual sum of squares and the Kullback-Leibler R-squared equals the
    classical R-squared.
    """

    name = "gaussian"

    def validate_y(self, y):
        if not np.all(np.isfinite(y)):
            raise ResponseDomainError("gaussian response must be finite")

    def inv_link(self, eta):
        return np.asarray(eta, dtype=float)

    def link(self, mu):
        return np.asarray(mu, dtype=float)

    def mu_interior(self, mu):
        return bool(np.all(np.isfinite(mu)))

    def loglik(self, y, mu):
        return float(-0.5 * np.sum((y - mu) ** 2) - 0.5 * len(y) * LOG_2PI)

    def score_eta(self, y, mu):
        return y - mu

    def curvature_eta(self, y, mu):
        return np.ones_like(mu)

    def null_eta(self, y):
        return float(np.mean(y))

    def kl_between(self, mu1, mu2):
        return float(np.sum((mu1 - mu2) ** 2))

    def sample(self, mu, rng):
        return rng.normal(mu, 1.0)


class BernoulliLogit(Family):
    """Bernoulli response with logit link.

    y | x ~ Bernoulli(mu), logit(mu) = x'beta.  The saturated
    log-likelihood is exactly zero.
    """

    name = "logit"
    is_count = True

    def validate_y(self, y):
        if not np.all(np.isin(y, (0.0, 1.0))):
            raise ResponseDomainError("logit response must be 0 or 1")

    def inv_link(self, eta):
        return special.expit(eta)

    def link(self, mu):
        return special.logit(mu)

    def mu_interior(self, mu):
        return bool(np.all(mu > 0.0) and np.all(mu < 1.0))

    def loglik(self, y, mu):
        return float(np.sum(special.xlogy(y, mu) + special.xlogy(1.0 - y, 1.0 - mu)))

    def loglik_from_eta(self, y, eta):
        # y*eta - log(1 + e^eta), stable for large |eta|
        return float(np.sum(y * eta - np.logaddexp(0.0, eta)))

    def saturated_loglik(self, y):
        return 0.0

    def score_eta(self, y, mu):
        return y - mu

    def curvature_eta(self, y, mu):
        return mu * (1.0 - mu)

    def null_eta(self, y):
        p = float(np.mean(y))
        if p <= 0.0 or p >= 1.0:
            raise DegenerateRunError("binary response is constant")
        return float(special.logit(p))

    def pmf(self, j, mu):
        j = np.asarray(j, dtype=float)
        mu = np.asarray(mu, dtype=float)
        out = np.where(j == 1.0, mu, np.where(j == 0.0, 1.0 - mu, 0.0))
        return out

    def kl_between(self, mu1, mu2):
        terms = special.xlogy(mu1, mu1 / mu2) + special.xlogy(1.0 - mu1, (1.0 - mu1) / (1.0 - mu2))
        return float(2.0 * np.sum(terms))

    def sample(self, mu, rng):
        return rng.binomial(1, mu).astype(float)


class PoissonLog(Family):
    """Poisson response with log link.

    y | x ~ Poisson(mu), log(mu) = x'beta.
    """

    name = "poisson"
    is_count = True

    def validate_y(self, y):
        _check_integer(y, "poisson", 0)

    def inv_link(self, eta):
        with np.errstate(over="ignore"):
            return np.exp(eta)

    def link(self, mu):
        return np.log(mu)

    def mu_interior(self, mu):
        return bool(np.all(mu > 0.0) and np.all(np.isfinite(mu)))

    def loglik(self, y, mu):
        return float(np.sum(special.xlogy(y, mu) - mu - special.gammaln(y + 1.0)))

    def loglik_from_eta(self, y, eta):
        with np.errstate(over="ignore"):
            return float(np.sum(y * eta - np.exp(eta) - special.gammaln(y + 1.0)))

    def score_eta(self, y, mu):
        return y - mu

    def curvature_eta(self, y, mu):
        return mu

    def null_eta(self, y):
        ybar = float(np.mean(y))
        if ybar <= 0.0:
            raise DegenerateRunError("count response is identically zero")
        return float(np.log(ybar))

    def pmf(self, j, mu):
        j = np.asarray(j, dtype=float)
        mu = np.asarray(mu, dtype=float)
        valid = (j >= 0.0) & (j == np.floor(j))
        jj = np.where(valid, j, 0.0)
        out = np.exp(special.xlogy(jj, mu) - mu - special.gammaln(jj + 1.0))
        return np.where(valid, out, 0.0)

    def kl_between(self, mu1, mu2):
        terms = special.xlogy(mu1, mu1 / mu2) - (mu1 - mu2)
        return float(2.0 * np.sum(terms))

    def sample(self, mu, rng):
        return rng.poisson(mu).astype(float)


class ZTPoissonLog(Family):
    """Zero-truncated Poisson with log link on the untruncated rate.

    f(y; mu) = mu^y / ((e^mu - 1) y!) for y = 1, 2, ...  The parameter mu
    is the rate of the parent Poisson; the fitted mean of the truncated
    distribution is mu + mu/(e^mu - 1), which exceeds mu.  The log link on
    mu is the canonical link of this family.
    """

    name = "zt-poisson"
    is_count = True

    def validate_y(self, y):
        _check_integer(y, "zero-truncated", 1)

    def inv_link(self, eta):
        with np.errstate(over="ignore"):
            return np.exp(eta)

    def link(self, mu):
        return np.log(mu)

    def mu_interior(self, mu):
        return bool(np.all(mu > 0.0) and np.all(np.isfinite(mu)))

    @staticmethod
    def truncated_mean(mu):
        """E[y] = mu * e^mu / (e^mu - 1) = mu + mu/expm1(mu)."""
        mu = np.asarray(mu, dtype=float)
        with np.errstate(over="ignore"):
            return mu + mu / np.expm1(mu)

    def loglik(self, y, mu):
        mu = np.asarray(mu, dtype=float)
        return float(
            np.sum(special.xlogy(y, mu) - _log_expm1(mu) - special.gammaln(y + 1.0))
        )

    def loglik_from_eta(self, y, eta):
        with np.errstate(over="ignore"):
            mu = np.exp(eta)
        if not np.all(np.isfinite(mu)):
            return -np.inf
        return float(np.sum(y * eta - _log_expm1(mu) - special.gammaln(y + 1.0)))

    def score_eta(self, y, mu):
        return y - self.truncated_mean(mu)

    def curvature_eta(self, y, mu):
        # variance of the truncated distribution: m * (1 + mu - m)
        with np.errstate(over="ignore"):
            r = mu / np.expm1(mu)
        return (mu + r) * (1.0 - r)

    def null_eta(self, y):
        from scipy.optimize import brentq

        ybar = float(np.mean(y))
        if ybar <= 1.0:
            raise DegenerateRunError("zero-truncated response is constant at 1")
        lo = max(ybar - 1.0, 1e-12)
        mu0 = brentq(
            lambda m: float(self.truncated_mean(m)) - ybar, lo, ybar, xtol=1e-13
        )
        return float(np.log(mu0))

    def pmf(self, j, mu):
        j = np.asarray(j, dtype=float)
        mu = np.asarray(mu, dtype=float)
        valid = (j >= 1.0) & (j == np.floor(j))
        jj = np.where(valid, j, 1.0)
        out = np.exp(special.xlogy(jj, mu) - _log_expm1(mu) - special.gammaln(jj + 1.0))
        return np.where(valid, out, 0.0)

    def kl_between(self, mu1, mu2):
        m1 = self.truncated_mean(mu1)
        terms = (np.log(mu1) - np.log(mu2)) * m1 - (_log_expm1(mu1) - _log_expm1(mu2))
        return float(2.0 * np.sum(terms))

    def sample(self, mu, rng):
        # inverse-cdf draw restricted to the positive support
        mu = np.asarray(mu, dtype=float)
        lo = stats.poisson.pmf(0, mu)
        u = rng.uniform(low=lo, high=1.0)
        return stats.poisson.ppf(u, mu).astype(float)


class GeometricLog(Family):
    """Geometric response with log link on the mean.

    f(y; mu) = mu^y / (1 + mu)^(y+1) for y = 0, 1, 2, ...  This is the
    negative binomial with shape fixed at one; the log link is not the
    canonical link, so the fitter uses the observed information, which is
    positive for all mu > 0.
    """

    name = "geometric"
    is_count = True

    def validate_y(self, y):
        _check_integer(y, "geometric", 0)

    def inv_link(self, eta):
        with np.errstate(over="ignore"):
            return np.exp(eta)

    def link(self, mu):
        return np.log(mu)

    def mu_interior(self, mu):
        return bool(np.all(mu > 0.0) and np.all(np.isfinite(mu)))

    def loglik(self, y, mu):
        return float(np.sum(special.xlogy(y, mu) - (y + 1.0) * np.log1p(mu)))

    def loglik_from_eta(self, y, eta):
        # y*eta - (y+1)*log(1 + e^eta)
        return float(np.sum(y * eta - (y + 1.0) * np.logaddexp(0.0, eta)))

    def score_eta(self, y, mu):
        return (y - mu) / (1.0 + mu)

    def curvature_eta(self, y, mu):
        return mu * (1.0 + y) / (1.0 + mu) ** 2

    def null_eta(self, y):
        ybar = float(np.mean(y))
        if ybar <= 0.0:
            raise DegenerateRunError("count response is identically zero")
        return float(np.log(ybar))

    def pmf(self, j, mu):
        j = np.asarray(j, dtype=float)
        mu = np.asarray(mu, dtype=float)
        valid = (j >= 0.0) & (j == np.floor(j))
        jj = np.where(valid, j, 0.0)
        out = np.exp(special.xlogy(jj, mu) - (jj + 1.0) * np.log1p(mu))
        return np.where(valid, out, 0.0)

    def kl_between(self, mu1, mu2):
        terms = special.xlogy(mu1, mu1 / mu2) - (1.0 + mu1) * (
            np.log1p(mu1) - np.log1p(mu2)
        )
        return float(2.0 * np.sum(terms))

    def sample(self, mu, rng):
        # numpy's geometric counts trials >= 1; failures before success has mean mu
        p = 1.0 / (1.0 + np.asarray(mu, dtype=float))
        return (rng.geometric(p) - 1).astype(float)


GAUSSIAN = GaussianIdentity()
LOGIT = BernoulliLogit()
POISSON = PoissonLog()
ZT_POISSON = ZTPoissonLog()
GEOMETRIC = GeometricLog()

FAMILIES = {f.name: f for f in (GAUSSIAN, LOGIT, POISSON, ZT_POISSON, GEOMETRIC)}
_ALIASES = {
    "gaussian-identity": "gaussian",
    "bernoulli-logit": "logit",
    "bernoulli": "logit",
    "poisson-log": "poisson",
    "zt-poisson-log": "zt-poisson",
    "ztpoisson": "zt-poisson",
    "geometric-log": "geometric",
}


def get_family(family):
    """Resolve a family name (or pass a Family instance through)."""
    if isinstance(family, Family):
        return family
    key = str(family).strip().lower()
    key = _ALIASES.get(key, key)
    if key not in FAMILIES:
        known = ", ".join(sorted(FAMILIES))
        from .exceptions import ConfigError

        raise ConfigError(f"unknown family '{family}' (known: {known})")
    return FAMILIES[key]
