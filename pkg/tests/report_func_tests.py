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

from classes.errors import ConfigError, DatasetFormatError  # noqa: E402
from functions.formatters import format_estimate, format_metadata_value, format_verdict  # noqa: E402
from functions.report_funcs import (  # noqa: E402
    metadata_lines,
    read_dataset_csv,
    read_points_csv,
    read_report_csv,
    write_report_csv,
)
from functions.util_funcs import default_seed, load_json_config, load_variables, merge_settings  # noqa: E402


@pytest.fixture
def toy_csv(tmp_path):
    path = tmp_path / "train.csv"
    path.write_text("u1,u2,y\n0.5,1.0,2.0\n-1.0,0.2,1.1\n2.0,-0.3,4.2\n")
    return path


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_metadata_lines():
    assert metadata_lines({"seed": 7, "criteria": ["AICc", "BIC"], "noise": 0.1}) == [
        "# seed=7",
        "# criteria=AICc,BIC",
        "# noise=0.1",
    ]


def test_formatters():
    assert format_estimate(1.5, 0.25) == "1.5 ± 0.25"
    assert format_verdict(True) == "PASS"
    assert format_verdict(False) == "FAIL"
    assert format_metadata_value((0.0, 4.0)) == "0.0,4.0"


def test_report_round_trip(tmp_path):
    df = pd.DataFrame({"criterion": ["AICc", "BIC"], "risk": [0.0125, 1 / 3]})
    path = write_report_csv(df, tmp_path / "out" / "risk.csv", {"version": "0.1.0", "seed": 7})
    text = path.read_text()
    assert text.startswith("# version=0.1.0\n# seed=7\ncriterion,risk\n")
    assert "\r" not in text

    metadata, table = read_report_csv(path)
    assert metadata == {"version": "0.1.0", "seed": "7"}
    assert list(table["criterion"]) == ["AICc", "BIC"]
    assert table["risk"].iloc[1] == pytest.approx(1 / 3, rel=1e-9)


def test_report_is_byte_stable(tmp_path):
    df = pd.DataFrame({"x": np.linspace(-1, 1, 5), "risk": np.linspace(0.1, 0.5, 5) ** 2})
    a = write_report_csv(df, tmp_path / "a.csv", {"seed": 7}).read_bytes()
    b = write_report_csv(df.copy(), tmp_path / "b.csv", {"seed": 7}).read_bytes()
    assert a == b


def test_read_dataset_csv(toy_csv):
    dataset, features = read_dataset_csv(toy_csv)
    assert features == ["u1", "u2"]
    assert dataset.n == 3 and dataset.d == 2
    np.testing.assert_allclose(dataset.Y, [2.0, 1.1, 4.2])


@pytest.mark.parametrize(
    "text",
    [
        "u1,y\n1.0,2.0\n3.0\n",
        "u1,y\n1.0,2.0\n3.0,abc\n",
        "u1,y\n1.0,2.0\n3.0,4.0,5.0\n",
        "u1,y\n",
        "",
        "u1,y\n1.0,inf\n",
        "y\n1.0\n2.0\n",
    ],
)
def test_read_dataset_csv_rejects_malformed(tmp_path, text):
    path = write(tmp_path, "bad.csv", text)
    with pytest.raises(DatasetFormatError):
        read_dataset_csv(path)


def test_read_dataset_csv_missing_file(tmp_path):
    with pytest.raises(DatasetFormatError, match="not found"):
        read_dataset_csv(tmp_path / "missing.csv")


def test_read_points_csv(tmp_path):
    path = write(tmp_path, "test.csv", "u2,u1\n1.0,2.0\n3.0,4.0\n")
    np.testing.assert_allclose(read_points_csv(path, ["u1", "u2"]), [[2.0, 1.0], [4.0, 3.0]])
    with pytest.raises(DatasetFormatError):
        read_points_csv(path, ["u1", "u3"])


def test_load_variables_returns_copies():
    variables = load_variables()
    variables["general"]["SEED"] = 99
    assert load_variables()["general"]["SEED"] == 7
    settings = load_variables()["multivariate"]["TRAIN_SETTINGS"]
    variables["multivariate"]["TRAIN_SETTINGS"].append("gaussian-500")
    assert load_variables()["multivariate"]["TRAIN_SETTINGS"] == settings


def test_default_seed():
    assert default_seed(environ={}) == 7
    assert default_seed(environ={"XSEL_SEED": "42"}) == 42
    for bad in ("-3", "seven"):
        with pytest.raises(ConfigError):
            default_seed(environ={"XSEL_SEED": bad})


def test_load_json_config(tmp_path):
    assert load_json_config(write(tmp_path, "c.json", '{"repeats": 5}')) == {"repeats": 5}
    with pytest.raises(ConfigError):
        load_json_config(write(tmp_path, "list.json", "[1, 2]"))
    with pytest.raises(ConfigError):
        load_json_config(write(tmp_path, "broken.json", "{"))
    with pytest.raises(ConfigError):
        load_json_config(tmp_path / "none.json")


def test_merge_settings():
    merged = merge_settings({"seed": 7, "repeats": 100}, {"repeats": 5}, {"seed": None})
    assert merged == {"seed": 7, "repeats": 5}
