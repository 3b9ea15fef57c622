# -*- coding: utf-8 -*-
"""
CSV input and output.

Reports start with ``# key=value`` comment lines (seed, version and the
resolved configuration) followed by a headered, comma-separated table.
Datasets are headered CSV files with the response in the last column.
"""

import logging
import sys
from pathlib import Path

import numpy as np
import pandas as pd

project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from classes.errors import DatasetFormatError  # noqa: E402
from classes.linear_models import Dataset  # noqa: E402
from functions.formatters import format_metadata_value  # noqa: E402

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.10g"


def metadata_lines(metadata: dict) -> list[str]:
    """
    ``# key=value`` lines in the order of ``metadata``.

    Examples
    --------
    >>> metadata_lines({"seed": 7, "criteria": ["AICc", "BIC"]})
    ['# seed=7', '# criteria=AICc,BIC']
    """
    return [f"# {key}={format_metadata_value(value)}" for key, value in metadata.items()]


def write_report_csv(df: pd.DataFrame, path: str | Path, metadata: dict) -> Path:
    """
    Write a report table behind its metadata header.

    Parameters
    ----------
    df : pd.DataFrame
        Table to write, without index.
    path : str or Path
        Destination file; parent directories are created.
    metadata : dict
        Header entries, written in insertion order.

    Returns
    -------
    Path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(metadata_lines(metadata)) + "\n")
        fh.write(body)
    logger.info("wrote %s (%d rows)", path, len(df))
    return path


def read_report_csv(path: str | Path) -> tuple[dict, pd.DataFrame]:
    """Read back a report written by ``write_report_csv``: (metadata, table)."""
    metadata = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("# "):
                break
            key, _, value = line[2:].rstrip("\n").partition("=")
            metadata[key] = value
    return metadata, pd.read_csv(path, comment="#")


def read_numeric_csv(path: str | Path, min_columns: int = 1) -> pd.DataFrame:
    """
    Read a headered CSV and require every cell to be a finite number.

    Raises
    ------
    DatasetFormatError
        On missing files, ragged rows, empty tables, non-numeric or missing cells.
    """
    try:
        df = pd.read_csv(path, skipinitialspace=True, comment="#", dtype=str)
    except FileNotFoundError as exc:
        raise DatasetFormatError(f"dataset not found: {path}") from exc
    except pd.errors.EmptyDataError as exc:
        raise DatasetFormatError(f"dataset {path} is empty") from exc
    except pd.errors.ParserError as exc:
        raise DatasetFormatError(f"dataset {path} has ragged rows: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise DatasetFormatError(f"dataset {path} is not UTF-8") from exc

    if df.shape[0] == 0:
        raise DatasetFormatError(f"dataset {path} has a header but no rows")
    if df.shape[1] < min_columns:
        raise DatasetFormatError(
            f"dataset {path} needs at least {min_columns} columns, got {df.shape[1]}"
        )
    if df.isna().any().any():
        row = int(np.flatnonzero(df.isna().any(axis=1).to_numpy())[0]) + 2
        raise DatasetFormatError(f"dataset {path} has a short row or empty cell at line {row}")
    try:
        numeric = df.apply(lambda col: pd.to_numeric(col.str.strip(), errors="raise"))
    except ValueError as exc:
        raise DatasetFormatError(f"dataset {path} has a non-numeric cell: {exc}") from exc
    if not np.all(np.isfinite(numeric.to_numpy(dtype=float))):
        raise DatasetFormatError(f"dataset {path} has non-finite values")
    return numeric.astype(float)


def read_dataset_csv(path: str | Path) -> tuple[Dataset, list[str]]:
    """
    Training data from a headered CSV: features first, response in the last column.

    Returns
    -------
    tuple[Dataset, list[str]]
        The dataset and the feature column names.
    """
    df = read_numeric_csv(path, min_columns=2)
    features = list(df.columns[:-1])
    dataset = Dataset(X=df[features].to_numpy(), Y=df.iloc[:, -1].to_numpy())
    logger.info("read %d rows with %d features from %s", dataset.n, dataset.d, path)
    return dataset, features


def read_points_csv(path: str | Path, features: list[str]) -> np.ndarray:
    """Test inputs from a headered CSV; the training feature columns are picked by name."""
    df = read_numeric_csv(path)
    missing = [f for f in features if f not in df.columns]
    if missing:
        raise DatasetFormatError(f"test inputs {path} lack the feature columns {missing}")
    return df[features].to_numpy()
