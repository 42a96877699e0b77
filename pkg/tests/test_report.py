import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from glmshapley import (
    POISSON,
    ZT_POISSON,
    analyze,
    analyze_hurdle,
    fit,
    fit_measure,
    rootogram,
    run_constants,
)
from glmshapley.report import (
    ReportDocument,
    RootogramData,
    clamp_rounding,
    hurdle_rootogram_data,
    measure_block,
    render_document,
    rootogram_data,
)
from glmshapley.shapley import ShapleyResult

from conftest import synth_dataset
from test_hurdle import hurdle_dataset


def toy_result(phi, measure_kind="kl-r2", family="poisson"):
    phi = np.asarray(phi, dtype=float)
    return ShapleyResult(
        players=tuple(f"x{i + 1}" for i in range(len(phi))),
        measure=fit_measure(measure_kind, family),
        phi=phi,
        v_grand=float(phi.sum()),
        v_empty=0.0,
        is_pseudo=False,
        constants=run_constants(-100.0, -40.0),
        lr=10.0,
    )


# --------------------------------------------------------------------------
# measure blocks and clamping

def test_block_sorted_by_phi_descending():
    block = measure_block(toy_result([0.05, 0.30, 0.10]))
    assert list(block.phi.keys()) == ["x2", "x3", "x1"]
    assert list(block.phi.values()) == [0.30, 0.10, 0.05]


def test_clamp_rule():
    assert clamp_rounding(-5e-9) == 0.0
    assert clamp_rounding(-1e-8) == 0.0
    assert clamp_rounding(-2e-8) == -2e-8  # too negative to be rounding noise
    assert clamp_rounding(1e-12) == 1e-12
    assert clamp_rounding(0.0) == 0.0


def test_block_clamps_rounding_noise_and_keeps_raw():
    block = measure_block(toy_result([0.2, -3e-9]))
    assert block.phi["x2"] == 0.0
    assert block.phi_raw["x2"] == -3e-9
    clean = measure_block(toy_result([0.2, 0.1]))
    assert clean.phi_raw is None


# --------------------------------------------------------------------------
# document round trips

def test_single_report_json_round_trip():
    ds = synth_dataset("poisson", n=150, p=3, seed=70)
    doc = analyze(ds, family="poisson", measures=("kl-r2", "loglik"),
                  include_cache=True)
    text = doc.to_json()
    again = ReportDocument.from_json(text)
    assert again.to_dict() == doc.to_dict()
    assert json.loads(text) == doc.to_dict()


def test_hurdle_report_json_round_trip():
    ds = hurdle_dataset(seed=71)
    doc = analyze_hurdle(ds, measures=("kl-r2",))
    again = ReportDocument.from_json(doc.to_json())
    assert again.to_dict() == doc.to_dict()
    assert again.n_plus == doc.n_plus
    assert again.total_loglik == doc.total_loglik


def test_report_deterministic_apart_from_timestamps():
    ds = synth_dataset("geometric", n=150, p=3, seed=72)
    a = analyze(ds, family="geometric").to_dict()
    b = analyze(ds, family="geometric").to_dict()
    for d in (a, b):
        d.pop("wall_seconds")
        d.pop("created_at")
    assert a == b


def test_render_uses_four_decimals():
    ds = synth_dataset("poisson", n=150, p=3, seed=73)
    doc = analyze(ds, family="poisson")
    text = render_document(doc)
    v = doc.part.measures["kl-r2"].v_grand
    assert f"{v:.4f}" in text
    first_player = next(iter(doc.part.measures["kl-r2"].phi))
    assert first_player in text


def test_subset_records_only_when_requested():
    ds = synth_dataset("poisson", n=120, p=2, seed=74)
    assert analyze(ds, family="poisson").part.subsets is None
    doc = analyze(ds, family="poisson", include_cache=True)
    assert len(doc.part.subsets) == 4
    empty = doc.part.subsets[0]
    assert empty["mask"] == 0
    assert empty["players"] == []
    assert empty["loglik"] == doc.part.constants["loglik_null"]


# --------------------------------------------------------------------------
# rootograms

def test_rootogram_mass_conservation_poisson():
    ds = synth_dataset("poisson", n=400, p=3, seed=75)
    fitted = fit(ds, "poisson")
    root = rootogram_data(ds.y, POISSON, fitted.mu, j_max=int(ds.y.max()) + 60)
    assert sum(root.observed) == ds.n
    assert abs(sum(root.expected) - ds.n) <= 1e-6 * ds.n
    assert_allclose(root.hanging_bottom,
                    np.sqrt(root.expected) - np.sqrt(root.observed), rtol=1e-12)


def test_rootogram_default_jmax_is_max_observed():
    ds = synth_dataset("poisson", n=200, p=2, seed=76)
    root = rootogram(ds, family="poisson")
    assert root.counts[-1] == int(ds.y.max())
    assert sum(root.observed) == ds.n


def test_rootogram_degenerate_equal_means():
    # all fitted means equal: expected_j = n * f(j; mu)
    y = np.array([0.0, 1.0, 2.0, 1.0, 0.0, 3.0])
    mu = np.full(6, float(y.mean()))
    root = rootogram_data(y, POISSON, mu)
    for j, e in zip(root.counts, root.expected):
        assert_allclose(e, 6.0 * float(POISSON.pmf(j, y.mean())), rtol=1e-12)


def test_hurdle_rootogram_zero_bin_is_binary_zero_probability():
    ds = hurdle_dataset(seed=77)
    root = rootogram(ds, hurdle=True)
    from glmshapley import split

    binary_ds, count_ds = split(ds)
    b = fit(binary_ds, "logit")
    assert_allclose(root.expected[0], float(np.sum(1.0 - b.mu)), rtol=1e-12)
    assert sum(root.observed) == ds.n


def test_hurdle_rootogram_positive_bins_combine_parts():
    mu_b = np.array([0.3, 0.8])
    mu_c = np.array([1.5, 2.5])
    y = np.array([0.0, 2.0])
    root = hurdle_rootogram_data(y, mu_b, mu_c)
    for j in (1, 2):
        oracle = float(np.sum(mu_b * ZT_POISSON.pmf(j, mu_c)))
        assert_allclose(root.expected[j], oracle, rtol=1e-12)


def test_hurdle_rootogram_mass_conservation():
    ds = hurdle_dataset(seed=78, n=300)
    root = rootogram(ds, hurdle=True, j_max=int(ds.y.max()) + 60)
    assert sum(root.observed) == ds.n
    assert abs(sum(root.expected) - ds.n) <= 1e-6 * ds.n


def test_rootogram_json_round_trip():
    ds = synth_dataset("poisson", n=120, p=2, seed=79)
    root = rootogram(ds, family="poisson")
    again = RootogramData.from_dict(json.loads(root.to_json()))
    assert again.to_dict() == root.to_dict()


def test_rootogram_rejects_gaussian():
    ds = synth_dataset("gaussian", n=100, p=2, seed=80)
    from glmshapley.exceptions import ConfigError

    with pytest.raises(ConfigError):
        rootogram(ds, family="gaussian")
