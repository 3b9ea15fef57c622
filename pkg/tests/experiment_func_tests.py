# -*- coding: utf-8 -*-
"""
Created on Thu Oct 15 2026

@author: Benedikt Goodman
"""

import pytest
import numpy as np
import pandas as pd

import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from classes.errors import ConfigError  # noqa: E402
from classes.sim_models import ExperimentConfig, TrueModel  # noqa: E402
from functions.experiment_funcs import (  # noqa: E402
    _training_sets,
    multivariate_models,
    parse_setting,
    run_multivariate,
    run_univariate,
    univariate_models,
    validate_roster,
)
from functions.util_funcs import load_variables  # noqa: E402


def univariate_config(**overrides):
    settings = dict(
        experiment="univariate",
        seed=7,
        repeats=4,
        criteria=("XAICc", "XAICc2", "AICc", "BIC", "GCV", "FAICc", "BMS", "BMA"),
        truth="f2",
        n=40,
        max_degree=3,
        grid_start=-4.0,
        grid_stop=4.0,
        grid_step=1.0,
    )
    settings.update(overrides)
    return ExperimentConfig(**settings)


def multivariate_config(**overrides):
    settings = dict(
        experiment="multivariate",
        seed=7,
        repeats=2,
        criteria=("XAICc", "FAICc", "AICc", "BIC", "BMS", "GCV", "AICcw", "BMA"),
        truth="fmulti",
        n_test=50,
        train_settings=("gaussian-30", "uniform-30", "gaussian-40"),
    )
    settings.update(overrides)
    return ExperimentConfig(**settings)


def selection(report, criterion, focus=None):
    rows = report.selections[report.selections["criterion"] == criterion]
    if focus is not None:
        rows = rows[rows["focus"] == focus]
    assert len(rows) == 1
    return rows.iloc[0]


def test_validate_roster():
    assert validate_roster(["AICc", "XAICcw", "BMA"], "multivariate") == ("AICc", "XAICcw", "BMA")
    assert validate_roster(["XAICc2"], "univariate") == ("XAICc2",)
    for bad in (["XAICc2"], ["GCVw"], ["TIC"], ["AICc", "AICc"], []):
        with pytest.raises(ConfigError):
            validate_roster(bad, "multivariate")


def test_parse_setting():
    assert parse_setting("spike-slab-60") == ("spike-slab", 60)
    assert parse_setting("gaussian-100") == ("gaussian", 100)
    with pytest.raises(ConfigError, match="unknown training distribution"):
        parse_setting("laplace-60")
    with pytest.raises(ConfigError):
        parse_setting("gaussian-many")
    with pytest.raises(ConfigError):
        parse_setting("gaussian-5")


def test_model_families():
    models = multivariate_models()
    assert len(models) == 64
    assert models[0].columns == () and models[-1].columns == (1, 2, 3, 4, 5, 6)
    assert [m.k_mu for m in models] == sorted(m.k_mu for m in models)
    assert models[1].columns == (1,) and models[7].columns == (1, 2)

    poly = univariate_models(6)
    assert [m.degree for m in poly] == list(range(7))
    assert all(m.basis_kind == "hermite" and m.variance_mode == "unknown" for m in poly)


def test_run_univariate_schema():
    config = univariate_config()
    report = run_univariate(config)
    grid = config.grid
    assert len(grid) == 9
    assert list(report.risk.columns) == ["criterion", "x", "risk", "se"]
    assert len(report.risk) == len(config.criteria) * len(grid)
    assert (report.risk["risk"] >= 0).all()

    assert selection(report, "FAICc", 0.0)["mean_index"] >= 1
    assert selection(report, "FAICc", 4.0)["mean_index"] <= 4
    assert "BMA" not in set(report.selections["criterion"])
    assert list(report.aggregate.columns) == ["criterion", "grid_mean_risk", "weighted_risk"]
    assert report.seed == 7


def test_run_univariate_is_thread_independent():
    config = univariate_config(repeats=3)
    single = run_univariate(config, threads=1)
    pooled = run_univariate(config, threads=3)
    pd.testing.assert_frame_equal(single.risk, pooled.risk)
    pd.testing.assert_frame_equal(single.selections, pooled.selections)
    pd.testing.assert_frame_equal(single.aggregate, pooled.aggregate)


def test_run_univariate_seed_changes_values_not_schema():
    a = run_univariate(univariate_config(repeats=2, seed=1))
    b = run_univariate(univariate_config(repeats=2, seed=2))
    assert list(a.risk.columns) == list(b.risk.columns)
    assert len(a.risk) == len(b.risk)
    assert not np.allclose(a.risk["risk"], b.risk["risk"])


def test_run_univariate_weighting_adds_variants():
    config = univariate_config(repeats=2, criteria=("AICc", "XAICc", "FAICc"), weighting=True)
    report = run_univariate(config)
    assert set(report.risk["criterion"]) == {"AICc", "XAICc", "FAICc", "AICcw", "XAICcw", "FAICcw"}
    assert report.risk["risk"].notna().all()


def test_run_univariate_rejects_multivariate_truth():
    with pytest.raises(ConfigError):
        run_univariate(univariate_config(truth="fmulti"))


def test_run_multivariate_schema():
    config = multivariate_config()
    report = run_multivariate(config)
    assert list(report.risk.columns) == ["criterion", "setting", "risk", "se"]
    assert len(report.risk) == len(config.criteria) * len(config.train_settings)
    assert set(report.risk["setting"]) == set(config.train_settings)
    assert report.aggregate is None
    picks = report.selections["mean_index"]
    assert ((picks >= 1) & (picks <= 64)).all()


def test_run_multivariate_is_thread_independent():
    config = multivariate_config(repeats=2, criteria=("AICc", "BIC"))
    pd.testing.assert_frame_equal(
        run_multivariate(config, threads=1).risk, run_multivariate(config, threads=2).risk
    )


def test_run_multivariate_rejects_bad_setting():
    with pytest.raises(ConfigError):
        run_multivariate(multivariate_config(train_settings=("cauchy-60",)))
    with pytest.raises(ConfigError):
        run_multivariate(multivariate_config(truth="f1"))


def test_run_multivariate_empirical_regime_matches_aic():
    config = multivariate_config(
        criteria=("XAIC", "AIC", "XAICc", "AICc"), xaic_regime="empirical", train_settings=("uniform-30",)
    )
    report = run_multivariate(config)
    picks = report.selections.set_index("criterion")
    assert picks.loc["XAIC", "mean_index"] == picks.loc["AIC", "mean_index"]
    assert picks.loc["XAIC", "var_index"] == picks.loc["AIC", "var_index"]
    risk = report.risk.set_index("criterion")
    assert risk.loc["XAIC", "risk"] == risk.loc["AIC", "risk"]
    assert risk.loc["XAIC", "se"] == risk.loc["AIC", "se"]
    assert risk.loc["XAICc", "risk"] == risk.loc["AICc", "risk"]


def test_training_sets_share_gaussian_prefix():
    config = multivariate_config(train_settings=("gaussian-30", "uniform-30", "gaussian-40"))
    sets = _training_sets(config, TrueModel(name="fmulti"), repeat=1, attempt=0)
    U_small, y_small = sets["gaussian-30"]
    U_large, y_large = sets["gaussian-40"]
    assert U_small.shape == (30, 6) and U_large.shape == (40, 6)
    np.testing.assert_array_equal(U_small, U_large[:30])
    np.testing.assert_array_equal(y_small, y_large[:30])


# --------------------------------------------------------------------------
# full-size experiment runs checked against reference values
# --------------------------------------------------------------------------


def full_univariate(truth):
    section = load_variables()["univariate"]
    return run_univariate(
        univariate_config(
            truth=truth,
            repeats=section["REPEATS"],
            n=section["N"],
            max_degree=section["MAX_DEGREE"],
            grid_step=section["GRID_STEP"],
            criteria=tuple(section["CRITERIA"]),
        ),
        threads=4,
    )


@pytest.mark.slow
def test_univariate_selection_table():
    f1 = full_univariate("f1")
    assert selection(f1, "XAICc2")["mean_index"] == 2.0
    assert selection(f1, "XAICc2")["var_index"] == 0.0
    assert selection(f1, "AICc")["mean_index"] == pytest.approx(2.33, abs=0.5)
    assert selection(f1, "BIC")["mean_index"] == pytest.approx(2.02, abs=0.5)
    assert selection(f1, "GCV")["mean_index"] == pytest.approx(2.38, abs=0.5)
    assert selection(f1, "XAICc")["mean_index"] == pytest.approx(2.10, abs=0.5)

    f2 = full_univariate("f2")
    assert selection(f2, "XAICc2")["mean_index"] == 3.0
    assert selection(f2, "XAICc2")["var_index"] == 0.0
    assert selection(f2, "AICc")["mean_index"] == pytest.approx(6.38, abs=0.5)
    assert selection(f2, "BIC")["mean_index"] == pytest.approx(5.70, abs=0.5)
    assert selection(f2, "GCV")["mean_index"] == pytest.approx(6.49, abs=0.5)
    assert selection(f2, "XAICc")["mean_index"] == pytest.approx(4.57, abs=0.5)
    assert selection(f2, "FAICc", 0.0)["mean_index"] == pytest.approx(6.56, abs=1.0)
    assert selection(f2, "FAICc", 4.0)["mean_index"] == pytest.approx(1.54, abs=0.5)
    assert selection(f2, "BMS")["mean_index"] == pytest.approx(4.05, abs=0.7)


@pytest.mark.slow
def test_focused_risk_curve_shape():
    report = full_univariate("f2")
    curve = report.risk.pivot(index="x", columns="criterion", values="risk")
    tails = curve[np.abs(curve.index) >= 3]
    assert tails["FAICc"].mean() < tails["AICc"].mean()
    # XAICc2 always picks degree 2; near x = 0 richer per-point choices win
    centre = curve[np.abs(curve.index) <= 0.5]
    assert centre["FAICc"].mean() < centre["XAICc2"].mean()


@pytest.mark.slow
def test_multivariate_risk_tables():
    section = load_variables()["multivariate"]
    report = run_multivariate(
        multivariate_config(
            repeats=section["REPEATS"],
            n_test=section["N_TEST"],
            train_settings=tuple(section["TRAIN_SETTINGS"]),
            criteria=tuple(section["CRITERIA"]),
        ),
        threads=4,
    )
    risk = report.risk.set_index(["criterion", "setting"])["risk"]
    assert risk[("XAICc", "gaussian-60")] == pytest.approx(0.0119, rel=0.3)
    assert risk[("FAICc", "spike-slab-60")] == pytest.approx(0.0133, rel=0.3)
    assert risk[("AICc", "spike-slab-60")] == pytest.approx(0.0156, rel=0.3)
    assert risk[("BMA", "gaussian-100")] == pytest.approx(0.0061, rel=0.3)
    assert risk[("XAICc", "spike-slab-60")] <= risk[("AICc", "spike-slab-60")]
    for name in ("XAICc", "FAICc", "AICc", "BIC"):
        for setting in section["TRAIN_SETTINGS"]:
            assert risk[(f"{name}w", setting)] <= risk[(name, setting)]
