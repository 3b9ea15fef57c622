# -*- coding: utf-8 -*-
"""
Univariate (polynomial) and multivariate (all-subsets) model selection experiments.

A repeat draws its data from its own substreams, fits every candidate model,
turns each criterion into a prediction on the test inputs and records the
selected model. Repeats run on a thread pool and are reduced in repeat order,
so the report does not depend on the number of threads.
"""

import itertools
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import stats

project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from classes.bayes_models import PriorSpec  # noqa: E402
from classes.errors import (  # noqa: E402
    ConfigError,
    DegenerateFitError,
    InsufficientDataError,
    SimulationError,
    SingularDesignError,
)
from classes.linear_models import ModelSpec  # noqa: E402
from classes.sim_models import ExperimentConfig, InputDist, RiskReport, TrueModel  # noqa: E402
from functions.bayes_funcs import (  # noqa: E402
    bma_predict,
    log_marginal_gaussian_slab,
    log_marginal_jeffreys,
    model_posterior,
    posterior_mean_gaussian_slab,
)
from functions.criteria_funcs import (  # noqa: E402
    aic,
    aicc,
    akaike_weighted_predict,
    akaike_weights_array,
    bic,
    gcv,
    kappa_distribution,
    kappa_empirical,
    kappa_focus_points,
    second_moment_for_spec,
    xaic_values,
)
from functions.linear_funcs import build_design, fit_ols, predict_design  # noqa: E402
from functions.sim_funcs import gen_inputs, gen_outputs, squared_risk, substream  # noqa: E402
from functions.util_funcs import load_variables  # noqa: E402

logger = logging.getLogger(__name__)

_VARIABLES = load_variables()
INPUT_DIM = int(_VARIABLES["multivariate"]["DIM"])
N_MIN = int(_VARIABLES["multivariate"]["N_MIN"])

FIT_FAILURES = (SingularDesignError, DegenerateFitError, InsufficientDataError)
TRAIN_DISTS = ("gaussian", "uniform", "spike-slab")

_GLOBAL_BASES = {"XAIC", "XAICc", "AIC", "AICc", "BIC", "GCV", "BMS"}
_FOCUS_BASES = {"FAIC", "FAICc"}
_WEIGHTABLE = {"XAIC", "XAICc", "XAIC2", "XAICc2", "FAIC", "FAICc", "AIC", "AICc", "BIC"}
UNIVARIATE_BASES = _GLOBAL_BASES | _FOCUS_BASES | {"XAIC2", "XAICc2"}
MULTIVARIATE_BASES = _GLOBAL_BASES | _FOCUS_BASES


def validate_roster(criteria, experiment: str) -> tuple[str, ...]:
    """
    Check a criteria roster for an experiment.

    Names are base criteria, ``BMA``, or a weightable base followed by ``w``
    (Akaike-weighted prediction instead of selection).

    Examples
    --------
    >>> validate_roster(["AICc", "XAICcw", "BMA"], "multivariate")
    ('AICc', 'XAICcw', 'BMA')
    """
    bases = UNIVARIATE_BASES if experiment == "univariate" else MULTIVARIATE_BASES
    roster = tuple(criteria)
    if not roster:
        raise ConfigError("the criteria roster is empty")
    for name in roster:
        if name == "BMA" or name in bases:
            continue
        if name.endswith("w") and name[:-1] in bases and name[:-1] in _WEIGHTABLE:
            continue
        raise ConfigError(f"unknown criterion {name!r} for the {experiment} experiment")
    if len(set(roster)) != len(roster):
        raise ConfigError(f"duplicate criteria in {roster}")
    return roster


def _expanded_roster(config: ExperimentConfig) -> tuple[str, ...]:
    bases = UNIVARIATE_BASES if config.experiment == "univariate" else MULTIVARIATE_BASES
    roster = list(validate_roster(config.criteria, config.experiment))
    if config.weighting:
        for name in list(roster):
            if name in _WEIGHTABLE and name in bases and f"{name}w" not in roster:
                roster.append(f"{name}w")
    return tuple(roster)


def parse_setting(setting: str) -> tuple[str, int]:
    """
    Split a training setting such as ``spike-slab-60`` into distribution and size.

    Examples
    --------
    >>> parse_setting("spike-slab-60")
    ('spike-slab', 60)
    """
    dist, _, size = setting.rpartition("-")
    if dist not in TRAIN_DISTS:
        raise ConfigError(
            f"unknown training distribution {dist or setting!r}; choose from {list(TRAIN_DISTS)}"
        )
    try:
        n = int(size)
    except ValueError:
        raise ConfigError(f"training setting {setting!r} has no integer size") from None
    if n < N_MIN:
        raise ConfigError(f"training size must be at least {N_MIN}, got {n}")
    return dist, n


def train_dist(name: str, dim: int = INPUT_DIM) -> InputDist:
    """Training input distribution for a setting name."""
    if name == "gaussian":
        return InputDist.standard_gaussian(dim)
    if name == "uniform":
        return InputDist.uniform_box(dim)
    if name == "spike-slab":
        return InputDist.spike_slab(dim)
    raise ConfigError(f"unknown training distribution {name!r}")


def multivariate_models(dim: int = INPUT_DIM) -> list[ModelSpec]:
    """All 2^dim subsets (with intercept), ordered by size then lexicographically."""
    return [
        ModelSpec.subset(cols)
        for size in range(dim + 1)
        for cols in itertools.combinations(range(1, dim + 1), size)
    ]


def univariate_models(max_degree: int) -> list[ModelSpec]:
    """Hermite polynomial models of degree 0..max_degree; model id = degree + 1."""
    return [ModelSpec.polynomial(d, basis_kind="hermite") for d in range(max_degree + 1)]


def _roster_outcome(roster, values, predictions, bma_prediction=None):
    """
    Predictions and selected model ids for every criterion of a roster.

    ``values`` maps base names to criterion values, shape (m,) for global
    criteria or (m, T) for focused ones; ``predictions`` is (m, T).
    """
    preds, selected = {}, {}
    columns = np.arange(predictions.shape[1])
    for name in roster:
        if name == "BMA":
            preds[name] = bma_prediction
            continue
        weighted = name.endswith("w") and name not in values
        v = values[name[:-1] if weighted else name]
        if weighted:
            preds[name] = akaike_weighted_predict(predictions, akaike_weights_array(v, axis=0))
        elif v.ndim == 1:
            idx = int(np.argmin(v))
            preds[name] = predictions[idx]
            selected[name] = idx + 1
        else:
            idx = np.argmin(v, axis=0)
            preds[name] = predictions[idx, columns]
            selected[name] = idx + 1
    return preds, selected


def _global_values(roster, fits, kappas) -> dict:
    """Values of the non-focused likelihood criteria needed by ``roster``."""
    bases = {name[:-1] if name.endswith("w") and name[:-1] in _WEIGHTABLE else name for name in roster}
    values = {}
    for base in bases:
        if base == "AIC":
            values[base] = np.array([aic(f).value for f in fits])
        elif base == "AICc":
            values[base] = np.array([aicc(f).value for f in fits])
        elif base == "BIC":
            values[base] = np.array([bic(f).value for f in fits])
        elif base == "GCV":
            values[base] = np.array([gcv(f).value for f in fits])
        elif base in kappas:
            corrected = base.startswith("XAICc")
            values[base] = np.array(
                [float(xaic_values(f, kap, corrected)) for f, kap in zip(fits, kappas[base])]
            )
    return values


def _focus_values(roster, fits, point_designs) -> dict:
    values = {}
    for base in _FOCUS_BASES:
        if base in roster or f"{base}w" in roster:
            values[base] = np.vstack(
                [
                    xaic_values(
                        f,
                        kappa_focus_points(d_train, d_points.values, f.variance_mode, gram_inv=f.gram_inv),
                        corrected=base == "FAICc",
                    )
                    for f, (d_train, d_points) in zip(fits, point_designs)
                ]
            )
    return values


def _fit_all(specs, raw_inputs, y):
    designs = [build_design(spec, raw_inputs) for spec in specs]
    return designs, [fit_ols(design, y, spec) for design, spec in zip(designs, specs)]


def _redraw_cap(config: ExperimentConfig) -> int:
    return max(1, int(config.max_redraw_fraction * config.repeats))


def _mean_se(samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    samples = np.asarray(samples, dtype=float)
    mean = samples.mean(axis=0)
    if samples.shape[0] < 2:
        return mean, np.zeros_like(mean)
    return mean, samples.std(axis=0, ddof=1) / np.sqrt(samples.shape[0])


def _run_repeats(func, config: ExperimentConfig, threads: int) -> list:
    threads = max(1, int(threads or 1))
    if threads == 1:
        outcomes = [func(r) for r in range(config.repeats)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(func, range(config.repeats)))
    failures = sum(o["failures"] for o in outcomes)
    cap = _redraw_cap(config)
    if failures > cap:
        raise SimulationError(f"{failures} replicates needed a redraw, above the cap of {cap}")
    if failures:
        logger.warning("%d replicates were redrawn after failed fits", failures)
    return outcomes


def _with_redraws(config: ExperimentConfig, repeat: int, attempt_fn) -> dict:
    cap = _redraw_cap(config)
    for attempt in range(cap + 1):
        try:
            outcome = attempt_fn(attempt)
        except FIT_FAILURES as exc:
            logger.warning("repeat %d attempt %d: %s; redrawing", repeat, attempt, exc)
            continue
        outcome["failures"] = attempt
        return outcome
    raise SimulationError(f"repeat {repeat} failed {cap + 1} times")


# --------------------------------------------------------------------------
# univariate
# --------------------------------------------------------------------------


def _univariate_second_moments(config: ExperimentConfig, roster) -> dict:
    """E[x x^T] per model for each distribution-regime criterion of the roster."""
    specs = univariate_models(config.max_degree)
    test_dists = {
        "XAIC": InputDist.standard_gaussian(),
        "XAICc": InputDist.standard_gaussian(),
        "XAIC2": InputDist.standard_gaussian(variance=config.xaic2_test_variance),
        "XAICc2": InputDist.standard_gaussian(variance=config.xaic2_test_variance),
    }
    needed = {name[:-1] if name.endswith("w") else name for name in roster}
    moments = {}
    for base, dist in test_dists.items():
        if base not in needed:
            continue
        if base in ("XAIC", "XAICc") and config.xaic_regime == "empirical":
            continue
        moments[base] = [second_moment_for_spec(s, dist, seed=config.seed) for s in specs]
    return moments


def _univariate_repeat(config: ExperimentConfig, roster, moments: dict, repeat: int) -> dict:
    truth = TrueModel(name=config.truth, noise_variance=config.noise_variance)
    specs = univariate_models(config.max_degree)
    grid = config.grid
    focus = np.array(config.focus_points, dtype=float)
    prior = PriorSpec(kind="gaussian_slab", slab_variance=config.slab_variance, flat_columns=(0,))

    def attempt(attempt_no: int) -> dict:
        rng = substream(config.seed, repeat, "univariate", attempt_no)
        xs = gen_inputs(InputDist.standard_gaussian(), config.n, rng)[:, 0]
        y = gen_outputs(truth, xs, rng)
        designs, fits = _fit_all(specs, xs, y)

        kappas = {
            base: [kappa_distribution(d, M, s.variance_mode) for d, M, s in zip(designs, ms, specs)]
            for base, ms in moments.items()
        }
        if config.xaic_regime == "empirical":
            empirical = [kappa_empirical(d, s.variance_mode) for d, s in zip(designs, specs)]
            kappas.update(XAIC=empirical, XAICc=empirical)
        values = _global_values(roster, fits, kappas)

        grid_designs = [build_design(s, grid) for s in specs]
        focus_designs = [build_design(s, focus) for s in specs]
        values.update(_focus_values(roster, fits, list(zip(designs, grid_designs))))
        predictions = np.vstack([predict_design(f, g) for f, g in zip(fits, grid_designs)])

        bma_prediction = None
        if "BMS" in roster or "BMA" in roster:
            anchor = fits[-1].sigma2_hat
            posterior = model_posterior(
                [log_marginal_gaussian_slab(d, y, prior, sigma2_anchor=anchor) for d in designs]
            )
            values["BMS"] = -2 * posterior.log_marginals
            if "BMA" in roster:
                means = [
                    posterior_mean_gaussian_slab(d, y, prior, sigma2_anchor=anchor) for d in designs
                ]
                bma_prediction = bma_predict(fits, posterior.weights, grid, coefficients=means)

        preds, selected = _roster_outcome(roster, values, predictions, bma_prediction)
        focus_values = _focus_values(roster, fits, list(zip(designs, focus_designs)))
        for base, v in focus_values.items():
            if base in roster:
                selected[base] = np.argmin(v, axis=0) + 1
        return {"preds": preds, "selected": selected}

    return _with_redraws(config, repeat, attempt)


def run_univariate(config: ExperimentConfig, threads: int = 1) -> RiskReport:
    """
    Polynomial model selection for one truth over ``config.repeats`` training draws.

    Parameters
    ----------
    config : ExperimentConfig
        ``experiment`` must be ``univariate`` and ``truth`` f1 or f2.
    threads : int
        Worker threads for the repeats; the report is identical for any value.

    Returns
    -------
    RiskReport
        ``risk`` has one row per criterion and grid x; ``selections`` one row per
        global criterion plus one per focused criterion and focus point;
        ``aggregate`` the grid-mean and N(0, 1)-weighted risks.
    """
    if config.experiment != "univariate":
        raise ConfigError(f"expected a univariate config, got {config.experiment!r}")
    if config.truth not in ("f1", "f2"):
        raise ConfigError(f"unknown truth {config.truth!r} for the univariate experiment")
    roster = _expanded_roster(config)
    grid = config.grid
    truth = TrueModel(name=config.truth, noise_variance=config.noise_variance)
    target = truth.f(grid[:, np.newaxis])
    logger.info(
        "univariate %s: %d repeats, %d criteria, seed %d",
        config.truth, config.repeats, len(roster), config.seed,
    )

    moments = _univariate_second_moments(config, roster)
    outcomes = _run_repeats(lambda r: _univariate_repeat(config, roster, moments, r), config, threads)

    risk_frames = []
    for name in roster:
        losses = np.vstack([squared_risk(o["preds"][name], target) for o in outcomes])
        mean, se = _mean_se(losses)
        risk_frames.append(pd.DataFrame({"criterion": name, "x": grid, "risk": mean, "se": se}))
    risk = pd.concat(risk_frames, ignore_index=True)

    rows = []
    focus_points = list(config.focus_points)
    for name in outcomes[0]["selected"]:
        if name in _FOCUS_BASES:
            for j, x in enumerate(focus_points):
                picks = np.array([o["selected"][name][j] for o in outcomes], dtype=float)
                rows.append(_selection_row(name, config.truth, x, picks))
        else:
            picks = np.array([o["selected"][name] for o in outcomes], dtype=float)
            rows.append(_selection_row(name, config.truth, np.nan, picks))
    selections = pd.DataFrame(rows, columns=SELECTION_COLUMNS)

    density = stats.norm.pdf(grid)
    density = density / density.sum()
    aggregate = (
        risk.groupby("criterion", sort=False)["risk"]
        .agg(grid_mean_risk="mean", weighted_risk=lambda r: float(np.sum(r.to_numpy() * density)))
        .reset_index()
    )
    return RiskReport(
        risk=risk,
        selections=selections,
        aggregate=aggregate,
        failures=sum(o["failures"] for o in outcomes),
        seed=config.seed,
    )


SELECTION_COLUMNS = ["criterion", "setting", "focus", "mean_index", "var_index", "se"]


def _selection_row(name: str, setting: str, focus: float, picks: np.ndarray) -> dict:
    return {
        "criterion": name,
        "setting": setting,
        "focus": focus,
        "mean_index": float(picks.mean()),
        "var_index": float(picks.var()),
        "se": float(picks.std(ddof=1) / np.sqrt(picks.shape[0])) if picks.shape[0] > 1 else 0.0,
    }


# --------------------------------------------------------------------------
# multivariate
# --------------------------------------------------------------------------


def _training_sets(config: ExperimentConfig, truth: TrueModel, repeat: int, attempt: int) -> dict:
    """
    Training (U, y) per setting.

    All Gaussian settings share one draw of the largest Gaussian size, so a
    smaller Gaussian set is a prefix of a larger one.
    """
    parsed = {s: parse_setting(s) for s in config.train_settings}
    sets = {}
    gaussian_ns = [n for dist, n in parsed.values() if dist == "gaussian"]
    if gaussian_ns:
        rng = substream(config.seed, repeat, "train-gaussian", attempt)
        U = gen_inputs(train_dist("gaussian"), max(gaussian_ns), rng)
        y = gen_outputs(truth, U, rng)
    for setting, (dist, n) in parsed.items():
        if dist == "gaussian":
            sets[setting] = (U[:n], y[:n])
        else:
            rng = substream(config.seed, repeat, f"train-{setting}", attempt)
            U_other = gen_inputs(train_dist(dist), n, rng)
            sets[setting] = (U_other, gen_outputs(truth, U_other, rng))
    return sets


def _multivariate_repeat(config: ExperimentConfig, roster, repeat: int) -> dict:
    truth = TrueModel(name=config.truth, noise_variance=config.noise_variance)
    specs = multivariate_models()
    test_dist = InputDist.standard_gaussian(INPUT_DIM)
    second_moments = [second_moment_for_spec(s, test_dist, seed=config.seed) for s in specs]

    test_rng = substream(config.seed, repeat, "test")
    U_test = gen_inputs(test_dist, config.n_test, test_rng)
    target = truth.f(U_test)
    test_designs = [build_design(s, U_test) for s in specs]

    def attempt(attempt_no: int) -> dict:
        result = {"risk": {}, "selected": {}}
        for setting, (U, y) in _training_sets(config, truth, repeat, attempt_no).items():
            designs, fits = _fit_all(specs, U, y)
            if config.xaic_regime == "empirical":
                kap = [kappa_empirical(d, s.variance_mode) for d, s in zip(designs, specs)]
            else:
                kap = [
                    kappa_distribution(d, M, s.variance_mode)
                    for d, M, s in zip(designs, second_moments, specs)
                ]
            values = _global_values(roster, fits, {"XAIC": kap, "XAICc": kap})
            values.update(_focus_values(roster, fits, list(zip(designs, test_designs))))
            predictions = np.vstack([predict_design(f, t) for f, t in zip(fits, test_designs)])

            bma_prediction = None
            if "BMS" in roster or "BMA" in roster:
                posterior = model_posterior([log_marginal_jeffreys(d, y) for d in designs])
                values["BMS"] = -2 * posterior.log_marginals
                bma_prediction = bma_predict(fits, posterior.weights, U_test)

            preds, selected = _roster_outcome(roster, values, predictions, bma_prediction)
            result["risk"][setting] = {
                name: float(np.mean(squared_risk(p, target))) for name, p in preds.items()
            }
            result["selected"][setting] = {
                name: float(np.mean(idx)) for name, idx in selected.items()
            }
        return result

    return _with_redraws(config, repeat, attempt)


def run_multivariate(config: ExperimentConfig, threads: int = 1) -> RiskReport:
    """
    All-subsets selection over the configured training settings.

    Parameters
    ----------
    config : ExperimentConfig
        ``experiment`` must be ``multivariate`` and ``truth`` fmulti.
    threads : int
        Worker threads for the repeats; the report is identical for any value.

    Returns
    -------
    RiskReport
        ``risk`` has one row per criterion and training setting (test-set mean
        squared risk averaged over repeats); ``selections`` holds the average
        selected model id (focused criteria averaged over test points too).
    """
    if config.experiment != "multivariate":
        raise ConfigError(f"expected a multivariate config, got {config.experiment!r}")
    if config.truth != "fmulti":
        raise ConfigError(f"unknown truth {config.truth!r} for the multivariate experiment")
    for setting in config.train_settings:
        parse_setting(setting)
    roster = _expanded_roster(config)
    logger.info(
        "multivariate: %d repeats, settings %s, seed %d",
        config.repeats, ", ".join(config.train_settings), config.seed,
    )

    outcomes = _run_repeats(lambda r: _multivariate_repeat(config, roster, r), config, threads)

    risk_rows, selection_rows = [], []
    for name in roster:
        for setting in config.train_settings:
            losses = np.array([o["risk"][setting][name] for o in outcomes])
            mean, se = _mean_se(losses)
            risk_rows.append({"criterion": name, "setting": setting, "risk": float(mean), "se": float(se)})
    for name in outcomes[0]["selected"][config.train_settings[0]]:
        for setting in config.train_settings:
            picks = np.array([o["selected"][setting][name] for o in outcomes])
            selection_rows.append(_selection_row(name, setting, np.nan, picks))
    return RiskReport(
        risk=pd.DataFrame(risk_rows, columns=["criterion", "setting", "risk", "se"]),
        selections=pd.DataFrame(selection_rows, columns=SELECTION_COLUMNS),
        failures=sum(o["failures"] for o in outcomes),
        seed=config.seed,
    )
