# -*- coding: utf-8 -*-
"""
Created on Fri Oct 16 2026

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

from functions.report_funcs import read_report_csv  # noqa: E402
from xsel import main, parse_test_dist, risk_table  # noqa: E402


UNIVARIATE_SMALL = [
    "univariate", "--truth", "f1", "--repeats", "2", "--n", "30",
    "--max-degree", "2", "--grid-step", "1.0", "--threads", "1",
]


@pytest.fixture
def train_csv(tmp_path):
    rng = np.random.default_rng(5)
    x = rng.standard_normal(40)
    y = 2 + x + 0.3 * rng.standard_normal(40)
    path = tmp_path / "train.csv"
    pd.DataFrame({"x": x, "y": y}).to_csv(path, index=False)
    return path


def run(argv, tmp_path, name="out"):
    out = tmp_path / name
    return main(argv + ["--output-dir", str(out)]), out


def test_univariate_writes_reports(tmp_path):
    code, out = run(UNIVARIATE_SMALL + ["--seed", "7"], tmp_path)
    assert code == 0
    for name in ("risk_curve.csv", "selections.csv", "aggregate_risk.csv", "figure.svg"):
        assert (out / name).exists()
    metadata, risk = read_report_csv(out / "risk_curve.csv")
    assert metadata["seed"] == "7"
    assert metadata["version"] == "0.1.0"
    assert metadata["truth"] == "f1"
    assert "threads" not in metadata
    assert list(risk.columns) == ["criterion", "x", "risk", "se"]
    assert (out / "figure.svg").read_text().startswith("<svg")


def test_univariate_is_byte_identical_across_runs(tmp_path):
    _, first = run(UNIVARIATE_SMALL, tmp_path, "first")
    argv = [a if a != "1" else "3" for a in UNIVARIATE_SMALL]
    _, second = run(argv, tmp_path, "second")
    for name in ("risk_curve.csv", "selections.csv", "aggregate_risk.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("XSEL_SEED", "11")
    code, out = run(UNIVARIATE_SMALL, tmp_path)
    assert code == 0
    metadata, _ = read_report_csv(out / "selections.csv")
    assert metadata["seed"] == "11"


def test_json_config_is_overridden_by_flags(tmp_path):
    config = tmp_path / "config.json"
    config.write_text('{"repeats": 3, "n": 25, "seed": 5}')
    code, out = run(UNIVARIATE_SMALL + ["--config", str(config)], tmp_path)
    assert code == 0
    metadata, _ = read_report_csv(out / "risk_curve.csv")
    assert metadata["repeats"] == "2"
    assert metadata["n"] == "30"
    assert metadata["seed"] == "5"


def test_unknown_truth_exits_2(tmp_path, capsys):
    code, _ = run(["univariate", "--truth", "f3"], tmp_path)
    assert code == 2
    assert "unknown truth" in capsys.readouterr().err


def test_unknown_config_key_exits_2(tmp_path):
    config = tmp_path / "config.json"
    config.write_text('{"repeatz": 3}')
    code, _ = run(UNIVARIATE_SMALL + ["--config", str(config)], tmp_path)
    assert code == 2


def test_unknown_subcommand_exits_2():
    assert main(["simulate"]) == 2


def test_multivariate_risk_table(tmp_path):
    argv = [
        "multivariate", "--repeats", "1", "--n-test", "20", "--train-dist", "gaussian",
        "--train-dist", "uniform", "--n", "30", "--criteria", "AICc,BIC,XAICc", "--threads", "1",
    ]
    code, out = run(argv, tmp_path)
    assert code == 0
    _, table = read_report_csv(out / "risk_table.csv")
    assert list(table.columns) == [
        "criterion", "gaussian-30", "gaussian-30_se", "uniform-30", "uniform-30_se"
    ]
    assert list(table["criterion"]) == ["AICc", "BIC", "XAICc"]


def test_multivariate_bad_distribution_exits_2(tmp_path, capsys):
    code, _ = run(["multivariate", "--train-dist", "laplace", "--n", "60"], tmp_path)
    assert code == 2
    assert "unknown training distribution" in capsys.readouterr().err


def test_risk_table_layout():
    risk = pd.DataFrame(
        {
            "criterion": ["AICc", "AICc", "BIC", "BIC"],
            "setting": ["gaussian-60", "uniform-60"] * 2,
            "risk": [0.1, 0.2, 0.3, 0.4],
            "se": [0.01, 0.02, 0.03, 0.04],
        }
    )
    table = risk_table(risk)
    assert list(table.columns) == ["criterion", "gaussian-60", "gaussian-60_se", "uniform-60", "uniform-60_se"]
    assert table.loc[1, "uniform-60"] == 0.4


def test_select_focus_rows(train_csv, tmp_path, capsys):
    argv = ["select", str(train_csv), "--focus", "0", "--focus", "2.5", "--criteria", "FAICc,AICc"]
    code, out = run(argv, tmp_path)
    assert code == 0
    _, scores = read_report_csv(out / "scores.csv")
    faicc = scores[scores["criterion"] == "FAICc"]
    assert faicc["focus"].nunique() == 2
    assert len(faicc) == 2 * 2
    assert faicc.groupby("focus")["selected"].sum().tolist() == [1, 1]
    assert "FAICc" in capsys.readouterr().out


def test_select_empirical_regime_reproduces_aic(train_csv, tmp_path):
    argv = ["select", str(train_csv), "--empirical", "--criteria", "XAIC,AIC,XAICc,AICc"]
    code, out = run(argv, tmp_path)
    assert code == 0
    _, scores = read_report_csv(out / "scores.csv")
    values = scores.pivot(index="model_id", columns="criterion", values="value")
    assert (values["XAIC"] == values["AIC"]).all()
    assert (values["XAICc"] == values["AICc"]).all()


def test_select_default_roster_with_smoothed_regime(train_csv, tmp_path):
    code, out = run(["select", str(train_csv), "--smoothed"], tmp_path)
    assert code == 0
    metadata, scores = read_report_csv(out / "scores.csv")
    assert metadata["regime"] == "empirical_smoothed"
    assert set(scores["criterion"]) == {"AIC", "AICc", "BIC", "GCV", "XAIC", "XAICc"}
    assert scores.groupby("criterion")["selected"].sum().eq(1).all()


def test_select_polynomial_models_with_test_distribution(train_csv, tmp_path):
    argv = [
        "select", str(train_csv), "--models", "polynomial", "--max-degree", "3",
        "--test-dist", "gaussian:0,4", "--sigma2", "0.09",
    ]
    code, out = run(argv, tmp_path)
    assert code == 0
    _, scores = read_report_csv(out / "scores.csv")
    xaic = scores[scores["criterion"] == "XAIC"]
    assert len(xaic) == 4
    assert xaic["likelihood_constant"].notna().all()


def test_select_needs_regime_for_xaic(train_csv, tmp_path, capsys):
    code, _ = run(["select", str(train_csv), "--criteria", "XAIC"], tmp_path)
    assert code == 2
    assert "test-input regime" in capsys.readouterr().err


def test_select_rejects_malformed_csv(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1.0,2.0\n3.0,oops\n")
    code, _ = run(["select", str(bad)], tmp_path)
    assert code == 2


def test_select_skips_models_too_large_for_small_sample(tmp_path, caplog):
    rng = np.random.default_rng(8)
    U = rng.standard_normal((8, 6))
    frame = pd.DataFrame(U, columns=[f"u{j}" for j in range(1, 7)])
    frame["y"] = 1 + U[:, 0] + 0.5 * rng.standard_normal(8)
    path = tmp_path / "small.csv"
    frame.to_csv(path, index=False)

    code, out = run(["select", str(path)], tmp_path)
    assert code == 0
    _, scores = read_report_csv(out / "scores.csv")
    counts = scores.groupby("criterion")["model_id"].count()
    assert counts["AIC"] == 64 and counts["BIC"] == 64
    # AICc needs n - k - 1 >= 1: at most five features with n = 8
    assert counts["AICc"] == 64 - 6 - 1
    assert scores.groupby("criterion")["selected"].sum().eq(1).all()
    assert "AICc: excluding model 64" in caplog.text


def test_parse_test_dist():
    dist = parse_test_dist("uniform:-1,1", 2)
    assert dist.kind == "uniform_box" and dist.dim == 2
    np.testing.assert_allclose(parse_test_dist("gaussian:1,4", 1).mean, [1.0])


def test_verify_warns_on_few_reps(tmp_path, caplog):
    code, out = run(["verify", "--reps", "100"], tmp_path)
    assert code in (0, 3)
    assert "too wide" in caplog.text
    _, table = read_report_csv(out / "verify.csv")
    assert table["claim"].tolist()[:3] == ["known_variance", "unknown_variance", "in_sample"]
    assert "rademacher" in table["claim"].tolist()


@pytest.mark.slow
def test_verify_default_suite_passes(tmp_path):
    code, out = run(["verify", "--seed", "7"], tmp_path)
    assert code == 0
    _, table = read_report_csv(out / "verify.csv")
    assert table["passed"].all()


@pytest.mark.slow
def test_verify_detects_tampered_kappa(tmp_path):
    code, out = run(["verify", "--kappa-offset", "0.5"], tmp_path)
    assert code == 3
    _, table = read_report_csv(out / "verify.csv")
    assert not table.set_index("claim").loc["known_variance", "passed"]
