"""Goodness-of-fit measures evaluated from cached per-subset statistics.

All four measures are affine functions of the subset log-likelihood, so a
single enumeration pass (caching ``loglik`` per subset) serves every
measure.  Per-run constants:

* ``null_deviance`` = 2 * (loglik_sat - loglik_null)
* ``zeta``  = 1 - loglik_sat / loglik_null  (ratio McFadden / KL R-squared)
* ``C``     = 1 / (loglik_sat - loglik_null)

Measure definitions, with ``l`` the subset log-likelihood:

=================  =====================================  ===========  ==========
kind               value                                  lower bound  upper = 1
=================  =====================================  ===========  ==========
kl-r2              (l - l_null) / (l_sat - l_null)        yes          yes
mcfadden-r2        1 - l / l_null                         yes          binary only
shifted-loglik     l - l_null                             yes          no
loglik             l                                      no           no
=================  =====================================  ===========  ==========
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    ConfigError,
    DegenerateRunError,
    UndefinedZetaError,
    UnsupportedModeError,
)
from .families import get_family

MEASURE_KINDS = ("kl-r2", "mcfadden-r2", "loglik", "shifted-loglik")
_MEASURE_ALIASES = {
    "kl_r2": "kl-r2",
    "klr2": "kl-r2",
    "mcfadden_r2": "mcfadden-r2",
    "mcfadden": "mcfadden-r2",
    "shifted_loglik": "shifted-loglik",
    "shifted": "shifted-loglik",
    "ll": "loglik",
}

NULL_MODES = ("ml", "plugin")


@dataclass(frozen=True)
class FitMeasure:
    """A measure kind plus its bound metadata for the run's family."""

    kind: str
    has_lower_bound: bool
    has_upper_bound_one: bool


def measure_kind(kind):
    key = str(kind).strip().lower()
    key = _MEASURE_ALIASES.get(key, key)
    if key not in MEASURE_KINDS:
        raise ConfigError(
            f"unknown measure '{kind}' (known: {', '.join(MEASURE_KINDS)})"
        )
    return key


def fit_measure(kind, family):
    """Resolve a measure name into a FitMeasure for the given family."""
    if isinstance(kind, FitMeasure):
        return kind
    key = measure_kind(kind)
    family = get_family(family)
    if key == "kl-r2":
        return FitMeasure(key, True, True)
    if key == "mcfadden-r2":
        return FitMeasure(key, True, family.name == "logit")
    if key == "shifted-loglik":
        return FitMeasure(key, True, False)
    return FitMeasure(key, False, False)


@dataclass(frozen=True)
class SubsetStats:
    """Cached statistics of one subset fit."""

    loglik: float
    deviance: float


@dataclass(frozen=True)
class RunConstants:
    """Per-run quantities shared by every subset evaluation."""

    loglik_null: float
    loglik_sat: float
    null_deviance: float
    zeta: float
    C: float

    @property
    def zeta_mcfadden_factor(self):
        """Multiplier turning McFadden Shapley values into KL ones."""
        return -self.loglik_null / (self.loglik_sat - self.loglik_null)


def run_constants(loglik_null, loglik_sat, tol=1e-8):
    """Build RunConstants; rejects degenerate runs with zero null deviance."""
    null_deviance = 2.0 * (loglik_sat - loglik_null)
    if null_deviance <= tol:
        raise DegenerateRunError(
            f"null deviance {null_deviance:.3g} is not positive; "
            "the response carries no variation to decompose"
        )
    z = 1.0 - loglik_sat / loglik_null if loglik_null != 0.0 else np.nan
    return RunConstants(
        loglik_null=float(loglik_null),
        loglik_sat=float(loglik_sat),
        null_deviance=float(null_deviance),
        zeta=float(z),
        C=1.0 / (loglik_sat - loglik_null),
    )


def evaluate(measure, stats, consts):
    """Value of one measure for one subset."""
    kind = measure.kind if isinstance(measure, FitMeasure) else measure_kind(measure)
    ll = stats.loglik
    if kind == "kl-r2":
        return (ll - consts.loglik_null) / (consts.loglik_sat - consts.loglik_null)
    if kind == "mcfadden-r2":
        return 1.0 - ll / consts.loglik_null
    if kind == "shifted-loglik":
        return ll - consts.loglik_null
    return ll


def evaluate_array(measure, logliks, consts):
    """Vectorized ``evaluate`` over an array of subset log-likelihoods."""
    kind = measure.kind if isinstance(measure, FitMeasure) else measure_kind(measure)
    ll = np.asarray(logliks, dtype=float)
    if kind == "kl-r2":
        return (ll - consts.loglik_null) / (consts.loglik_sat - consts.loglik_null)
    if kind == "mcfadden-r2":
        return 1.0 - ll / consts.loglik_null
    if kind == "shifted-loglik":
        return ll - consts.loglik_null
    return ll.copy()


def zeta(consts):
    """McFadden-to-KL ratio 1 - loglik_sat/loglik_null (exactly 1 for binary)."""
    if consts.loglik_null == 0.0 or not np.isfinite(consts.zeta):
        raise UndefinedZetaError("zeta is undefined when the null log-likelihood is 0")
    return consts.zeta


def lr_statistic(stats_full, consts):
    """Likelihood ratio statistic of the full model against the null."""
    return 2.0 * (stats_full.loglik - consts.loglik_null)


def null_stats(ds, family, mode="ml", control=None):
    """Statistics of the empty-subset (intercept only) model.

    ``ml`` fits the intercept by maximum likelihood.  ``plugin`` (only for
    the zero-truncated Poisson) evaluates the log-likelihood at the rate
    set to the response mean, the textbook plug-in null for that model.
    """
    from .fitting import DEFAULT_CONTROL, fit

    family = get_family(family)
    if mode not in NULL_MODES:
        raise ConfigError(f"unknown null mode '{mode}' (known: {', '.join(NULL_MODES)})")
    if mode == "plugin":
        if family.name != "zt-poisson":
            raise UnsupportedModeError(
                f"plugin null is only defined for zt-poisson, not {family.name}"
            )
        family.validate_y(ds.y)
        ybar = float(np.mean(ds.y))
        mu0 = np.full(ds.n, ybar)
        ll = family.loglik(ds.y, mu0)
        return SubsetStats(loglik=ll, deviance=2.0 * (family.saturated_loglik(ds.y) - ll))
    fitted = fit(ds, family, subset=0, control=control or DEFAULT_CONTROL)
    return SubsetStats(loglik=fitted.loglik, deviance=fitted.deviance)
