"""Exact and sampled Shapley values over regressor subsets.

The characteristic function assigns a goodness-of-fit value to every
player subset; the Shapley value of a player is its average marginal
contribution over all subsets not containing it, with the coalition
weight ``|S|! (p-|S|-1)! / p!``.

Enumeration fits all ``2^p`` subsets once and caches ``(loglik,
deviance)`` per subset; every measure is an affine function of the
log-likelihood, so one pass serves all requested measures.  Subset fits
are pure functions of their inputs (each warm-starts from the
intercept-only solution, never from a parent subset), so results are
independent of traversal order and of the number of workers.
"""

import itertools
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import (
    ConfigError,
    EnumerationError,
    GlmShapleyError,
    NonConvergenceError,
)
from .families import get_family
from .fitting import DEFAULT_CONTROL, assert_full_rank, design_with_intercept, fit
from .measures import (
    SubsetStats,
    evaluate_array,
    fit_measure,
    lr_statistic,
    null_stats,
    run_constants,
)

EXACT_HARD_LIMIT = 25
EXACT_WARN_LIMIT = 15

# minimum number of subset fits before a process pool pays for itself
_PARALLEL_THRESHOLD = 64


def shapley_weight(p, k):
    """Coalition weight 1 / (p * binomial(p-1, k)) for |S| = k of p players.

    Uses exact integer binomials, so no factorial overflow for any
    supported p.  Summed over all subsets excluding a fixed player the
    weights total exactly 1.
    """
    if p < 1:
        raise ConfigError("p must be >= 1")
    if k < 0 or k > p - 1:
        raise ConfigError(f"coalition size {k} out of range 0..{p - 1}")
    return 1.0 / (p * math.comb(p - 1, k))


def _popcounts(p):
    masks = np.arange(1 << p, dtype=np.int64)
    counts = np.zeros(1 << p, dtype=np.int64)
    v = masks.copy()
    for _ in range(p):
        counts += v & 1
        v >>= 1
    return counts


def shapley_from_game(values):
    """Shapley values of an explicit game given as a length-2^p value array.

    ``values[mask]`` is the characteristic value of the subset encoded by
    ``mask`` (bit i set means player i included).  Per-player sums use
    exact (compensated) summation, so efficiency holds to near machine
    precision even with many mixed-sign terms.
    """
    values = np.asarray(values, dtype=float)
    size = values.shape[0]
    p = size.bit_length() - 1
    if size != (1 << p) or p < 1:
        raise ConfigError("values must have length 2^p with p >= 1")
    counts = _popcounts(p)
    weight_by_size = np.array([shapley_weight(p, k) for k in range(p)])
    masks = np.arange(size, dtype=np.int64)
    phi = np.empty(p)
    for i in range(p):
        without = masks[(masks >> i) & 1 == 0]
        diffs = values[without | (1 << i)] - values[without]
        phi[i] = math.fsum(weight_by_size[counts[without]] * diffs)
    return phi


class SubsetFitCache:
    """Per-subset statistics for all 2^p player subsets of one run."""

    def __init__(self, p, loglik, loglik_sat):
        loglik = np.asarray(loglik, dtype=float)
        if loglik.shape != (1 << p,):
            raise ConfigError("loglik must have one entry per subset")
        self.p = p
        self.loglik = loglik
        self.loglik_sat = float(loglik_sat)

    @property
    def deviance(self):
        return 2.0 * (self.loglik_sat - self.loglik)

    def __len__(self):
        return self.loglik.shape[0]

    def stats(self, mask):
        mask = int(mask)
        return SubsetStats(
            loglik=float(self.loglik[mask]),
            deviance=2.0 * (self.loglik_sat - float(self.loglik[mask])),
        )

    def constants(self):
        return run_constants(float(self.loglik[0]), self.loglik_sat)


@dataclass
class ShapleyResult:
    """Per-player Shapley values for one measure, plus run metadata.

    ``imp_fm`` are shares of the fitted model's value (sum to 1);
    ``imp_bm`` are absolute importances against the measure's upper bound
    of 1 and are only present for measures that have one.  ``mc_stderr``
    is present only for sampled runs.
    """

    players: tuple
    measure: object
    phi: np.ndarray
    v_grand: float
    v_empty: float
    is_pseudo: bool
    constants: object
    lr: float
    imp_fm: np.ndarray = None
    imp_bm: np.ndarray = None
    mc_stderr: np.ndarray = None
    n_fits: int = 0
    mc_samples: int = None

    @property
    def p(self):
        return len(self.players)

    def ranking(self):
        """Player names sorted by Shapley value, largest first."""
        order = np.lexsort((self.players, -self.phi))
        return tuple(self.players[i] for i in order)


def importance_measures(result):
    """Populate the share-of-fitted-model and absolute importance fields."""
    total = math.fsum(result.phi)
    imp_fm = result.phi / total if total != 0.0 else None
    imp_bm = result.phi.copy() if result.measure.has_upper_bound_one else None
    return replace(result, imp_fm=imp_fm, imp_bm=imp_bm)


# ---------------------------------------------------------------------------
# subset enumeration

_WORKER_STATE = {}


def _init_worker(ds, family_name, control, saturated):
    _WORKER_STATE["ds"] = ds
    _WORKER_STATE["family"] = get_family(family_name)
    _WORKER_STATE["control"] = control
    _WORKER_STATE["saturated"] = saturated


def _fit_mask_worker(mask):
    try:
        fitted = fit(
            _WORKER_STATE["ds"],
            _WORKER_STATE["family"],
            subset=mask,
            control=_WORKER_STATE["control"],
            check_rank=False,
        )
        return mask, fitted.loglik, None
    except NonConvergenceError as exc:
        best = exc.best.loglik if exc.best is not None else None
        return mask, None, (str(exc), best)
    except GlmShapleyError as exc:
        return mask, None, (str(exc), None)


def _enumeration_order(p):
    masks = sorted(range(1 << p), key=lambda m: (m.bit_count(), m))
    return masks


def enumerate_subsets(ds, family, control=DEFAULT_CONTROL, workers=None,
                      null_mode="ml", permissive=False):
    """Fit every player subset and cache the per-subset statistics.

    Fits run in increasing-coalition-size order (serial) or across a
    process pool (``workers`` > 1); either way each fit is independent and
    results are identical.  Any failing subset aborts the run with an
    error naming the subset; with ``permissive=True`` a non-converged fit
    contributes its best iterate instead, under a loud warning (only
    failures that carry a best iterate can be substituted).
    """
    family = get_family(family)
    p = ds.p
    if p > EXACT_HARD_LIMIT:
        raise ConfigError(
            f"exact enumeration limited to {EXACT_HARD_LIMIT} players (got {p}); "
            "use sampling"
        )
    if p > EXACT_WARN_LIMIT:
        warnings.warn(
            f"exact enumeration over {1 << p} subsets (p={p}) may take a long time",
            RuntimeWarning,
            stacklevel=2,
        )
    family.validate_y(ds.y)
    X, names = design_with_intercept(ds, ds.full_mask)
    assert_full_rank(X, names)
    saturated = family.saturated_loglik(ds.y)

    def handle_failure(mask, detail, best_loglik):
        included = [ds.players[i].name for i in range(p) if mask >> i & 1]
        if permissive and best_loglik is not None:
            warnings.warn(
                f"subset 0b{mask:b} ({{{', '.join(included)}}}) did not converge; "
                "substituting its best iterate (values may be distorted)",
                RuntimeWarning,
                stacklevel=3,
            )
            return best_loglik
        raise EnumerationError(mask, included, detail)

    masks = _enumeration_order(p)
    loglik = np.empty(1 << p)
    if workers is None:
        workers = os.cpu_count() or 1
    use_pool = workers > 1 and len(masks) >= _PARALLEL_THRESHOLD

    if use_pool:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(ds, family.name, control, saturated),
        ) as pool:
            chunk = max(1, len(masks) // (workers * 8))
            for mask, ll, err in pool.map(_fit_mask_worker, masks, chunksize=chunk):
                if err is not None:
                    detail, best_loglik = err
                    ll = handle_failure(mask, detail, best_loglik)
                loglik[mask] = ll
    else:
        for mask in masks:
            try:
                ll = fit(ds, family, subset=mask, control=control,
                         check_rank=False).loglik
            except NonConvergenceError as exc:
                best = exc.best.loglik if exc.best is not None else None
                ll = handle_failure(mask, str(exc), best)
            except GlmShapleyError as exc:
                ll = handle_failure(mask, str(exc), None)
            loglik[mask] = ll

    if null_mode != "ml":
        stats0 = null_stats(ds, family, mode=null_mode, control=control)
        loglik[0] = stats0.loglik
    return SubsetFitCache(p, loglik, saturated)


def shapley_from_cache(cache, measure, consts, players):
    """Shapley values of one measure computed from cached subset statistics."""
    values = evaluate_array(measure, cache.loglik, consts)
    phi = shapley_from_game(values)
    full = len(values) - 1
    result = ShapleyResult(
        players=tuple(players),
        measure=measure,
        phi=phi,
        v_grand=float(values[full]),
        v_empty=float(values[0]),
        is_pseudo=bool(values[0] != 0.0),
        constants=consts,
        lr=lr_statistic(cache.stats(full), consts),
        n_fits=len(values),
    )
    return importance_measures(result)


def shapley_exact(ds, family, measure="kl-r2", control=DEFAULT_CONTROL, workers=None,
                  null_mode="ml"):
    """Exact Shapley decomposition of one measure over all 2^p subsets.

    Returns ``(ShapleyResult, SubsetFitCache)``.
    """
    family = get_family(family)
    measure = fit_measure(measure, family)
    cache = enumerate_subsets(ds, family, control=control, workers=workers,
                              null_mode=null_mode)
    consts = cache.constants()
    return shapley_from_cache(cache, measure, consts, ds.player_names), cache


def shapley_permutation_oracle(cache, measure, consts):
    """All-orderings average of marginal contributions (p <= 9).

    Enumerates every one of the p! player orderings and averages each
    player's marginal contribution; algebraically identical to the
    subset-weight formula, so it serves as an independent cross-check.
    """
    p = cache.p
    if p > 9:
        raise ConfigError(f"orderings enumeration limited to 9 players (got {p})")
    values = evaluate_array(measure, cache.loglik, consts)
    nperm = math.factorial(p)
    marginals = [np.empty(nperm) for _ in range(p)]
    for idx, perm in enumerate(itertools.permutations(range(p))):
        mask = 0
        prev = values[0]
        for i in perm:
            mask |= 1 << i
            cur = values[mask]
            marginals[i][idx] = cur - prev
            prev = cur
    return np.array([math.fsum(m) / nperm for m in marginals])


# ---------------------------------------------------------------------------
# Monte Carlo permutation sampling

def _sampled_run(ds, family, measures, samples, seed, control=DEFAULT_CONTROL,
                 null_mode="ml"):
    """Permutation-sampling estimates for several measures in one pass.

    One set of orderings (fixed by ``seed``) and one memoized collection
    of subset fits serve all measures, so multi-measure runs stay
    mutually consistent and reproducible.  When ``samples`` covers all p!
    orderings, the orderings are enumerated deterministically and the
    estimate is exact.
    """
    family = get_family(family)
    if samples < 1:
        raise ConfigError("samples must be >= 1")
    p = ds.p
    family.validate_y(ds.y)
    X, names = design_with_intercept(ds, ds.full_mask)
    assert_full_rank(X, names)

    memo = {}

    def loglik_of(mask):
        if mask not in memo:
            if mask == 0 and null_mode != "ml":
                memo[mask] = null_stats(ds, family, mode=null_mode, control=control).loglik
            else:
                try:
                    memo[mask] = fit(ds, family, subset=mask, control=control,
                                     check_rank=False).loglik
                except GlmShapleyError as exc:
                    included = [ds.players[i].name for i in range(p) if mask >> i & 1]
                    raise EnumerationError(mask, included, str(exc)) from exc
        return memo[mask]

    saturated = family.saturated_loglik(ds.y)
    consts = run_constants(loglik_of(0), saturated)
    ll_empty = loglik_of(0)
    ll_full = loglik_of((1 << p) - 1)

    exhaustive = math.factorial(p) <= samples
    if exhaustive:
        orderings = list(itertools.permutations(range(p)))
    else:
        rng = np.random.default_rng(seed)
        orderings = [tuple(rng.permutation(p)) for _ in range(samples)]
    n_draws = len(orderings)

    # per-ordering marginal log-likelihood gains, converted per measure later
    ll_marginals = np.empty((n_draws, p))
    for row, perm in enumerate(orderings):
        mask = 0
        prev = ll_empty
        for i in perm:
            mask |= 1 << i
            cur = loglik_of(mask)
            ll_marginals[row, i] = cur - prev
            prev = cur

    results = {}
    for kind in measures:
        measure = fit_measure(kind, family)
        # measures are affine in the log-likelihood: value differences are
        # scaled log-likelihood differences
        if measure.kind == "kl-r2":
            scale = 1.0 / (consts.loglik_sat - consts.loglik_null)
        elif measure.kind == "mcfadden-r2":
            scale = -1.0 / consts.loglik_null
        else:
            scale = 1.0
        marg = ll_marginals * scale
        phi = np.array([math.fsum(marg[:, i]) / n_draws for i in range(p)])
        if n_draws > 1:
            stderr = marg.std(axis=0, ddof=1) / math.sqrt(n_draws)
        else:
            stderr = np.full(p, np.nan)
        v_empty = float(evaluate_array(measure, np.array([ll_empty]), consts)[0])
        v_grand = float(evaluate_array(measure, np.array([ll_full]), consts)[0])
        result = ShapleyResult(
            players=ds.player_names,
            measure=measure,
            phi=phi,
            v_grand=v_grand,
            v_empty=v_empty,
            is_pseudo=bool(v_empty != 0.0),
            constants=consts,
            lr=2.0 * (ll_full - consts.loglik_null),
            mc_stderr=stderr,
            n_fits=len(memo),
            mc_samples=n_draws,
        )
        results[measure.kind] = importance_measures(result)
    return results


def shapley_sampled(ds, family, measure="kl-r2", samples=10000, seed=0,
                    control=DEFAULT_CONTROL, null_mode="ml"):
    """Monte Carlo permutation-sampling estimate of the Shapley values.

    Draws ``samples`` random player orderings (reproducibly from
    ``seed``), adds players one at a time, and averages the marginal
    measure gains.  The estimate is unbiased; per-player standard errors
    are reported in ``mc_stderr``.  When ``samples >= p!`` all orderings
    are enumerated instead and the result equals the exact value.
    """
    family = get_family(family)
    kind = fit_measure(measure, family).kind
    return _sampled_run(ds, family, [kind], samples, seed, control=control,
                        null_mode=null_mode)[kind]
