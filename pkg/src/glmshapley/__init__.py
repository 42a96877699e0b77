"""Shapley-value decomposition of goodness of fit for generalized linear models.

The characteristic function of the importance game is a goodness-of-fit
measure evaluated on every regressor subset; the default is the
Kullback-Leibler R-squared, the fraction of deviance explained, which is
bounded in [0, 1] and reduces to the classical R-squared for linear
models and to McFadden's likelihood ratio index for binary responses.
"""

__version__ = "0.1.0"

from .data import Dataset, Player, encode_dataset, read_table, select_columns
from .families import (
    FAMILIES,
    GAUSSIAN,
    GEOMETRIC,
    LOGIT,
    POISSON,
    ZT_POISSON,
    Family,
    get_family,
)
from .fitting import (
    DEFAULT_CONTROL,
    FitControl,
    FittedGlm,
    fit,
    kl_divergence,
    predict_prob,
    saturated_loglik,
)
from .measures import (
    FitMeasure,
    RunConstants,
    SubsetStats,
    evaluate,
    fit_measure,
    lr_statistic,
    null_stats,
    run_constants,
    zeta,
)
from .shapley import (
    ShapleyResult,
    SubsetFitCache,
    enumerate_subsets,
    importance_measures,
    shapley_exact,
    shapley_from_cache,
    shapley_from_game,
    shapley_permutation_oracle,
    shapley_sampled,
    shapley_weight,
)
from .hurdle import HurdleReport, HurdleSpec, split
from .report import ReportDocument, RootogramData, render_document
from .api import analyze, analyze_hurdle, rootogram
from . import exceptions

__all__ = [
    "__version__",
    "Dataset", "Player", "encode_dataset", "read_table", "select_columns",
    "FAMILIES", "GAUSSIAN", "LOGIT", "POISSON", "ZT_POISSON", "GEOMETRIC",
    "Family", "get_family",
    "FitControl", "FittedGlm", "DEFAULT_CONTROL",
    "fit", "saturated_loglik", "kl_divergence", "predict_prob",
    "FitMeasure", "SubsetStats", "RunConstants",
    "fit_measure", "evaluate", "zeta", "lr_statistic", "null_stats",
    "run_constants",
    "ShapleyResult", "SubsetFitCache",
    "shapley_weight", "shapley_from_game", "shapley_from_cache",
    "shapley_exact", "shapley_permutation_oracle", "shapley_sampled",
    "importance_measures", "enumerate_subsets",
    "HurdleSpec", "HurdleReport", "split",
    "ReportDocument", "RootogramData", "render_document",
    "analyze", "analyze_hurdle", "rootogram",
    "exceptions",
]
