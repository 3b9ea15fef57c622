# -*- coding: utf-8 -*-
"""
Configuration helpers: reading ``variables.toml`` and merging overrides.
"""

import copy
import json
import logging
import os
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from functools import lru_cache
from pathlib import Path

project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from classes.errors import ConfigError  # noqa: E402

logger = logging.getLogger(__name__)

VARIABLES_PATH = project_root / "variables.toml"


@lru_cache(maxsize=None)
def _read_toml(path: str) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def load_variables(path: str | Path | None = None) -> dict:
    """
    Load the project defaults.

    Parameters
    ----------
    path : str or Path, optional
        Alternative TOML file, by default ``variables.toml`` at the project root.

    Returns
    -------
    dict
        Nested mapping of TOML sections. A fresh copy is returned on every call.

    Examples
    --------
    >>> load_variables()["general"]["SEED"]
    7
    """
    path = Path(path) if path is not None else VARIABLES_PATH
    try:
        data = _read_toml(str(path))
    except FileNotFoundError as exc:
        raise ConfigError(f"defaults file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"defaults file {path} is not valid TOML: {exc}") from exc
    return copy.deepcopy(data)


def default_seed(variables: dict | None = None, environ: dict | None = None) -> int:
    """Documented default seed, overridden by the ``XSEL_SEED`` environment variable."""
    variables = variables or load_variables()
    environ = os.environ if environ is None else environ
    env_var = variables["general"]["SEED_ENV_VAR"]
    raw = environ.get(env_var)
    if raw is None or raw == "":
        return int(variables["general"]["SEED"])
    try:
        seed = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{env_var} must be a non-negative integer, got {raw!r}") from exc
    if seed < 0:
        raise ConfigError(f"{env_var} must be a non-negative integer, got {raw!r}")
    logger.debug("seed %d taken from %s", seed, env_var)
    return seed


def load_json_config(path: str | Path) -> dict:
    """Read a JSON experiment configuration document."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def merge_settings(*layers: dict) -> dict:
    """
    Merge flat mappings left to right; later layers win and ``None`` never overrides.

    Examples
    --------
    >>> merge_settings({"seed": 7, "repeats": 100}, {"repeats": None}, {"seed": 3})
    {'seed': 3, 'repeats': 100}
    """
    merged = {}
    for layer in layers:
        for key, value in layer.items():
            if value is not None:
                merged[key] = value
    return merged
