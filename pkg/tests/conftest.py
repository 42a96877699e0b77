"""Shared fixtures: synthetic dataset builders and case-study CSV discovery.

The three public case-study exports are user supplied; tests that
reproduce their published tables skip when the files are absent.  Set
GLMSHAPLEY_DATA to a directory holding the CSV exports (see README) or
drop them into ./data at the repository root.
"""

import os
from pathlib import Path

import numpy as np
import pytest

from glmshapley import Dataset, get_family

FAMILY_NAMES = ("gaussian", "logit", "poisson", "zt-poisson", "geometric")

# keeps linear predictors in a range where every family's counts stay sane
_INTERCEPT = {
    "gaussian": 0.5,
    "logit": 0.0,
    "poisson": 0.3,
    "zt-poisson": 0.3,
    "geometric": 0.3,
}


def synth_dataset(family, n=200, p=3, seed=0, coef_range=1.0, grouped=False):
    """Random dataset for one family with coefficients drawn in [-r, r].

    With ``grouped=True`` the first player owns two design columns, so
    the player count stays p while the design has p+1 columns.
    """
    family = get_family(family)
    rng = np.random.default_rng(seed)
    m = p + 1 if grouped else p
    for attempt in range(50):
        X = rng.normal(size=(n, m))
        beta = rng.uniform(-coef_range, coef_range, size=m + 1)
        eta = _INTERCEPT[family.name] + beta[0] + X @ beta[1:]
        if family.name == "gaussian":
            mu = eta
        elif family.name == "logit":
            mu = family.inv_link(eta)
        else:
            mu = np.exp(np.clip(eta, -20, 6))
        y = family.sample(mu, rng)
        if _usable(family, y):
            break
    else:
        raise RuntimeError(f"could not draw a usable {family.name} sample")
    players = None
    if grouped:
        players = [("g1", [0, 1])] + [(f"x{j}", [j]) for j in range(2, m)]
    return Dataset.from_arrays(y, X, players=players)


def _usable(family, y):
    if np.ptp(y) == 0:
        return False
    if family.name == "logit":
        return 0.0 < y.mean() < 1.0
    if family.name == "zt-poisson":
        return y.mean() > 1.0
    return True


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ---------------------------------------------------------------------------
# case-study data discovery

DATA_ENV = "GLMSHAPLEY_DATA"


def _data_dirs():
    dirs = []
    env = os.environ.get(DATA_ENV)
    if env:
        dirs.append(Path(env))
    dirs.append(Path(__file__).resolve().parent.parent / "data")
    return dirs


def find_export(*names):
    for d in _data_dirs():
        for name in names:
            candidate = d / name
            if candidate.is_file():
                return candidate
    return None


def doctor_visits_path():
    return find_export("doctor_visits.csv", "DoctorVisits.csv", "doctorvisits.csv")


def auto_claim_path():
    return find_export("auto_claim.csv", "AutoClaim.csv", "autoclaim.csv")


def nmes1988_path():
    return find_export("nmes1988.csv", "NMES1988.csv")


needs_doctor_visits = pytest.mark.skipif(
    doctor_visits_path() is None,
    reason="DoctorVisits export not supplied (set GLMSHAPLEY_DATA); criterion waived",
)
needs_auto_claim = pytest.mark.skipif(
    auto_claim_path() is None,
    reason="AutoClaim export not supplied (set GLMSHAPLEY_DATA); criterion waived",
)
needs_nmes1988 = pytest.mark.skipif(
    nmes1988_path() is None,
    reason="NMES1988 export not supplied (set GLMSHAPLEY_DATA); criterion waived",
)


def load_doctor_visits():
    """DoctorVisits export: response 'visits', 9 named regressors."""
    import pandas as pd

    df = pd.read_csv(doctor_visits_path())
    df = df.drop(columns=[c for c in df.columns if c.lower().startswith("unnamed")])
    players = ["age", "gender", "health", "illness", "income",
               "lchronic", "nchronic", "private", "reduced"]
    return df, "visits", players


def _truthy(series):
    return series.astype(str).str.strip().str.lower().isin(
        ("yes", "y", "true", "t", "1")
    )


def load_auto_claim():
    """AutoClaim export restricted to the study subset, 13 named regressors.

    Accepts either the original upper-case column names or already-renamed
    ones; INCOME is scaled by 10000 into 'income'.
    """
    import pandas as pd

    df = pd.read_csv(auto_claim_path())
    df = df.drop(columns=[c for c in df.columns if c.lower().startswith("unnamed")])
    rename = {
        "CLM_FREQ5": "cfreq5", "AGE": "age", "AREA": "area",
        "CAR_TYPE": "cartype", "MAX_EDUC": "educ", "GENDER": "gender",
        "JOBCLASS": "jobclass", "MARRIED": "married", "RED_CAR": "red",
        "REVOLKED": "revoked", "PARENT1": "singlep", "CAR_USE": "usage",
        "MVR_PTS": "violation",
    }
    df = df.rename(columns={k: v for k, v in rename.items() if k in df.columns})
    if "INCOME" in df.columns and "income" not in df.columns:
        df["income"] = df["INCOME"] / 10000.0
    if "IN_YY" in df.columns:
        df = df[_truthy(df["IN_YY"])]
    players = ["age", "area", "cartype", "educ", "gender", "income", "jobclass",
               "married", "red", "revoked", "singlep", "usage", "violation"]
    df = df.dropna(subset=["cfreq5"] + players).reset_index(drop=True)
    return df, "cfreq5", players


def load_nmes1988():
    """NMES1988 export: response 'visits', 10 named regressors."""
    import pandas as pd

    df = pd.read_csv(nmes1988_path())
    df = df.drop(columns=[c for c in df.columns if c.lower().startswith("unnamed")])
    players = ["adl", "afam", "age", "chronic", "employed", "gender",
               "health", "income", "insurance", "married"]
    return df, "visits", players
