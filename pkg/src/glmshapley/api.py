"""High-level entry points: analyze, analyze_hurdle, rootogram.

These accept a data table (DataFrame, path, or prepared Dataset), run the
requested decomposition, and return report documents.  The command-line
driver is a thin wrapper over this module, so library calls and CLI runs
with equivalent configuration produce identical numbers.
"""

import os
import time

import pandas as pd

from .data import Dataset, encode_dataset, read_table
from .exceptions import ConfigError
from .families import get_family
from .fitting import DEFAULT_CONTROL, fit
from .hurdle import HurdleSpec, split
from .measures import fit_measure, measure_kind
from .report import (
    ReportDocument,
    hurdle_rootogram_data,
    part_report,
    rootogram_data,
    stamp,
)
from .shapley import _sampled_run, enumerate_subsets, shapley_from_cache


def _as_dataset(data, response, players, delimiter=","):
    if isinstance(data, Dataset):
        return data
    if isinstance(data, (str, os.PathLike)):
        data = read_table(data, delimiter=delimiter)
    if not isinstance(data, pd.DataFrame):
        data = pd.DataFrame(data)
    if response is None or players is None:
        raise ConfigError("response and players are required with tabular input")
    return encode_dataset(data, response, players)


def _measure_kinds(measures):
    if isinstance(measures, str):
        measures = [m for m in measures.split(",") if m.strip()]
    kinds = [measure_kind(m) for m in measures]
    if not kinds:
        raise ConfigError("at least one measure is required")
    # preserve order, drop duplicates
    seen = []
    for k in kinds:
        if k not in seen:
            seen.append(k)
    return seen


def _exact_results(ds, family, kinds, control, workers, null_mode):
    cache = enumerate_subsets(ds, family, control=control, workers=workers,
                              null_mode=null_mode)
    consts = cache.constants()
    family = get_family(family)
    results = {
        kind: shapley_from_cache(cache, fit_measure(kind, family), consts,
                                 ds.player_names)
        for kind in kinds
    }
    return results, cache


def analyze(data, response=None, players=None, family=None,
            measures=("kl-r2",), null="ml", mc_samples=None, seed=0,
            workers=None, control=DEFAULT_CONTROL, delimiter=",",
            include_cache=False, config_echo=None):
    """Shapley decomposition of one family's fit over all regressor subsets.

    Parameters
    ----------
    data : DataFrame, path, or Dataset
    response, players : required unless ``data`` is a Dataset
    family : family name
    measures : measure names (sequence or comma-separated string)
    null : "ml" or "plugin" (plugin applies to zt-poisson only)
    mc_samples : switch to Monte Carlo permutation sampling when set
    seed : sampling seed (ignored for exact runs)
    include_cache : embed the per-subset statistics in the report

    Returns
    -------
    ReportDocument
    """
    started = time.perf_counter()
    if family is None:
        raise ConfigError("family is required")
    family = get_family(family)
    ds = _as_dataset(data, response, players, delimiter=delimiter)
    kinds = _measure_kinds(measures)
    if mc_samples is not None:
        results = _sampled_run(ds, family, kinds, mc_samples, seed,
                               control=control, null_mode=null)
        cache = None
    else:
        results, cache = _exact_results(ds, family, kinds, control, workers, null)
    part = part_report(family.name, ds, results, cache=cache,
                       include_subsets=include_cache)
    doc = ReportDocument(
        config=config_echo or _echo(locals()),
        kind="single",
        part=part,
    )
    return stamp(doc, started)


def analyze_hurdle(data, response=None, players=None,
                   measures=("kl-r2",), null="ml", binary_players=None,
                   count_players=None, mc_samples=None, seed=0, workers=None,
                   control=DEFAULT_CONTROL, delimiter=",",
                   include_cache=False, config_echo=None):
    """Part-by-part Shapley decomposition of a two-part hurdle model.

    The binary part is a logit on the positive indicator over all rows;
    the count part is a zero-truncated Poisson over the positive rows.
    Returns a hurdle ReportDocument with both part reports.
    """
    started = time.perf_counter()
    ds = _as_dataset(data, response, players, delimiter=delimiter)
    kinds = _measure_kinds(measures)
    spec = HurdleSpec(
        binary_players=tuple(binary_players) if binary_players else None,
        count_players=tuple(count_players) if count_players else None,
    )
    binary_ds, count_ds = split(ds)
    if spec.binary_players is not None:
        binary_ds = binary_ds.restrict(spec.binary_players)
    if spec.count_players is not None:
        count_ds = count_ds.restrict(spec.count_players)

    if mc_samples is not None:
        binary_results = _sampled_run(binary_ds, "logit", kinds, mc_samples, seed,
                                      control=control, null_mode="ml")
        count_results = _sampled_run(count_ds, "zt-poisson", kinds, mc_samples, seed,
                                     control=control, null_mode=null)
        binary_cache = count_cache = None
        total = float(
            fit(binary_ds, "logit", control=control).loglik
            + fit(count_ds, "zt-poisson", control=control).loglik
        )
    else:
        binary_results, binary_cache = _exact_results(
            binary_ds, "logit", kinds, control, workers, "ml")
        count_results, count_cache = _exact_results(
            count_ds, "zt-poisson", kinds, control, workers, null)
        total = float(binary_cache.loglik[-1] + count_cache.loglik[-1])

    doc = ReportDocument(
        config=config_echo or _echo(locals()),
        kind="hurdle",
        binary=part_report("logit", binary_ds, binary_results,
                           cache=binary_cache, include_subsets=include_cache),
        count=part_report("zt-poisson", count_ds, count_results,
                          cache=count_cache, include_subsets=include_cache),
        n_plus=count_ds.n,
        total_loglik=total,
    )
    return stamp(doc, started)


def rootogram(data, response=None, players=None, family=None, hurdle=False,
              j_max=None, control=DEFAULT_CONTROL, delimiter=","):
    """Hanging rootogram data of the full model (all players).

    For hurdle runs the expected frequencies combine both parts: the zero
    bin is the binary part's zero probability; positive bins take the
    truncated count probabilities scaled by the positive probability.
    The count part's rates are predicted for every observation from the
    coefficients fitted on the positive rows.
    """
    ds = _as_dataset(data, response, players, delimiter=delimiter)
    if hurdle:
        binary_ds, count_ds = split(ds)
        binary_fit = fit(binary_ds, "logit", control=control)
        count_fit = fit(count_ds, "zt-poisson", control=control)
        # rate for all rows from the count part's coefficients
        from .fitting import design_with_intercept

        X_all, _ = design_with_intercept(ds, ds.full_mask)
        mu_count_all = get_family("zt-poisson").inv_link(X_all @ count_fit.beta)
        return hurdle_rootogram_data(ds.y, binary_fit.mu, mu_count_all, j_max=j_max)
    if family is None:
        raise ConfigError("family is required unless hurdle=True")
    family = get_family(family)
    if not family.is_count:
        raise ConfigError(f"rootograms need a count family, not {family.name}")
    fitted = fit(ds, family, control=control)
    return rootogram_data(ds.y, family, fitted.mu, j_max=j_max)


def _echo(ns):
    """Config echo for reports built directly from the library."""
    keys = ("response", "family", "measures", "null", "mc_samples", "seed",
            "workers", "delimiter")
    out = {}
    for k in keys:
        if k in ns:
            v = ns[k]
            if k == "family" and v is not None and not isinstance(v, str):
                v = v.name
            if k == "measures":
                v = list(v) if not isinstance(v, str) else v
            out[k] = v
    return out
