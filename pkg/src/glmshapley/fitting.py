"""Maximum likelihood fitting of one model for one player subset.

All five families have a globally concave log-likelihood in the
coefficients, so a safeguarded Newton iteration (step halving on any
log-likelihood decrease) converges deterministically.  For the families
whose log link is canonical this coincides with iteratively reweighted
least squares; the zero-truncated Poisson and geometric families use the
observed information, which is positive everywhere.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .exceptions import (
    ConfigError,
    DivergenceInfiniteError,
    NonConvergenceError,
    SingularDesignError,
)
from .families import get_family


@dataclass(frozen=True)
class FitControl:
    """Iteration limits for the Newton fitter."""

    max_iter: int = 100
    tol: float = 1e-10
    step_halving: int = 10

    def __post_init__(self):
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")
        if not self.tol > 0.0:
            raise ConfigError("tol must be > 0")
        if self.step_halving < 0:
            raise ConfigError("step_halving must be >= 0")


DEFAULT_CONTROL = FitControl()


@dataclass
class FittedGlm:
    """One converged maximum likelihood fit.

    ``deviance`` is constructed as ``2 * (saturated - loglik)``, so the
    identity with the log-likelihood holds exactly.
    """

    beta: np.ndarray
    eta: np.ndarray
    mu: np.ndarray
    loglik: float
    deviance: float
    iterations: int
    converged: bool
    subset: int


def design_with_intercept(ds, mask):
    """Intercept column prepended to the selected players' columns."""
    cols = ds.columns_for(mask)
    X = np.empty((ds.n, len(cols) + 1))
    X[:, 0] = 1.0
    X[:, 1:] = ds.design[:, cols]
    names = ("(intercept)",) + tuple(ds.column_names[c] for c in cols)
    return X, names


def assert_full_rank(X, names):
    """Column-pivoted QR rank check; raises naming the aliased columns."""
    r, piv = linalg.qr(X, mode="r", pivoting=True)
    diag = np.abs(np.diag(r[: X.shape[1], : X.shape[1]]))
    if diag.size == 0:
        return
    threshold = 1e-10 * diag[0]
    rank = int(np.sum(diag > threshold))
    if rank < X.shape[1]:
        aliased = [names[j] for j in sorted(piv[rank:])]
        raise SingularDesignError(aliased)


def _newton(X, y, family, control, saturated, mask):
    k = X.shape[1]
    beta = np.zeros(k)
    beta[0] = family.null_eta(y)
    eta = X @ beta
    ll = family.loglik_from_eta(y, eta)
    trace = [ll]
    if not np.isfinite(ll):
        raise NonConvergenceError(
            "log-likelihood not finite at the starting point", trace=trace
        )

    def best_iterate(converged):
        mu = family.inv_link(eta)
        return FittedGlm(
            beta=beta,
            eta=eta,
            mu=mu,
            loglik=ll,
            deviance=2.0 * (saturated - ll),
            iterations=len(trace) - 1,
            converged=converged,
            subset=mask,
        )

    for _ in range(control.max_iter):
        mu = family.inv_link(eta)
        g = family.score_eta(y, mu)
        w = family.curvature_eta(y, mu)
        score = X.T @ g
        H = (X * w[:, None]).T @ X
        try:
            c, low = linalg.cho_factor(H)
            delta = linalg.cho_solve((c, low), score)
        except (np.linalg.LinAlgError, linalg.LinAlgError, ValueError) as exc:
            raise NonConvergenceError(
                f"information matrix not factorizable: {exc}",
                best=best_iterate(False),
                trace=trace,
            )
        slack = control.tol * (1.0 + abs(ll))
        step = 1.0
        accepted = None
        for _ in range(control.step_halving + 1):
            cand_beta = beta + step * delta
            cand_eta = X @ cand_beta
            cand_ll = family.loglik_from_eta(y, cand_eta)
            if np.isfinite(cand_ll) and cand_ll >= ll - slack:
                accepted = (cand_beta, cand_eta, cand_ll)
                break
            step *= 0.5
        if accepted is None:
            raise NonConvergenceError(
                "step halving exhausted without improving the log-likelihood",
                best=best_iterate(False),
                trace=trace,
            )
        beta, eta, new_ll = accepted
        trace.append(new_ll)
        if abs(new_ll - ll) <= slack:
            ll = new_ll
            # a discrete fit whose deviance vanished while the linear
            # predictor ran away sits on the mean-domain boundary: the
            # maximum is a supremum, not attained (perfect separation)
            if family.is_count and np.max(np.abs(eta)) > 30.0:
                deviance = 2.0 * (saturated - ll)
                if deviance <= 1e-8 * (1.0 + abs(saturated)):
                    raise NonConvergenceError(
                        "fitted means reached the boundary of the mean domain "
                        "(perfect separation)",
                        best=best_iterate(False),
                        trace=trace,
                    )
            return best_iterate(True)
        ll = new_ll

    raise NonConvergenceError(
        f"no convergence in {control.max_iter} iterations",
        best=best_iterate(False),
        trace=trace,
    )


def fit(ds, family, subset=None, control=DEFAULT_CONTROL, check_rank=True):
    """Maximum likelihood fit of ``family`` on the players in ``subset``.

    Parameters
    ----------
    ds : Dataset
    family : Family or str
    subset : int bitmask over players, or None for all players.
    control : FitControl
    check_rank : bool
        Skip the per-fit QR rank check when the caller has already
        verified the full design (every column subset of a full-rank
        matrix is full rank).

    Raises
    ------
    SingularDesignError
        The selected design is rank deficient (names aliased columns).
    NonConvergenceError
        Iteration failed; carries the best iterate and the trace.
    """
    family = get_family(family)
    family.validate_y(ds.y)
    mask = ds.full_mask if subset is None else int(subset)
    X, names = design_with_intercept(ds, mask)
    if check_rank:
        assert_full_rank(X, names)
    saturated = family.saturated_loglik(ds.y)
    return _newton(X, ds.y, family, control, saturated, mask)


def saturated_loglik(ds, family):
    """Log-likelihood of the saturated model (one parameter per observation)."""
    family = get_family(family)
    family.validate_y(ds.y)
    return family.saturated_loglik(ds.y)


def kl_divergence(ds, family, mu):
    """Kullback-Leibler divergence 2*(loglik(saturated) - loglik(mu)).

    This equals the (residual) deviance of a model with fitted means
    ``mu``.  Raises when any entry of ``mu`` sits on the boundary of the
    family's mean domain, where the divergence is infinite.
    """
    family = get_family(family)
    family.validate_y(ds.y)
    mu = np.asarray(mu, dtype=float)
    if mu.shape != ds.y.shape:
        raise ConfigError("mu must have one entry per observation")
    if not family.mu_interior(mu):
        raise DivergenceInfiniteError(
            f"mean vector on the boundary of the {family.name} mean domain"
        )
    return 2.0 * (family.saturated_loglik(ds.y) - family.loglik(ds.y, mu))


def predict_prob(family, mu, j):
    """Probability of count value ``j`` under mean parameter ``mu``.

    Values outside the family's support return 0.
    """
    family = get_family(family)
    return family.pmf(j, mu)
