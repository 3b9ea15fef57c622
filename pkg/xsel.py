# -*- coding: utf-8 -*-
"""
Command-line front end.

    xsel univariate    polynomial selection experiment (risk curves, selections, SVG figure)
    xsel multivariate  all-subsets selection experiment (risk table)
    xsel select        score candidate models for a CSV dataset
    xsel verify        Monte Carlo checks of the extra-sample penalty identities

Exit codes: 0 success, 2 usage or configuration error, 3 runtime failure.
"""

import argparse
import itertools
import logging
import os
import sys
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import ValidationError

project_root = Path(__file__).resolve().parent
sys.path.append(str(project_root))

from classes.cli_models import CliConfig  # noqa: E402
from classes.criteria_models import TestInputSpec  # noqa: E402
from classes.errors import (  # noqa: E402
    ConfigError,
    DatasetFormatError,
    InsufficientDataError,
    InvalidArgumentError,
    SmallSampleError,
    XselError,
)
from classes.linear_models import ModelSpec  # noqa: E402
from classes.sim_models import TRUTH_NAMES, ExperimentConfig, InputDist, TrueModel  # noqa: E402
from functions import __version__  # noqa: E402
from functions.criteria_funcs import (  # noqa: E402
    KAPPA_CRITERIA,
    akaike_weights,
    kappa_for_regime,
    score_criterion,
    select,
)
from functions.experiment_funcs import (  # noqa: E402
    FIT_FAILURES,
    parse_setting,
    run_multivariate,
    run_univariate,
    validate_roster,
)
from functions.formatters import format_estimate, format_verdict  # noqa: E402
from functions.linear_funcs import build_design, fit_ols  # noqa: E402
from functions.plot_funcs import create_risk_curve_chart, figure_to_svg  # noqa: E402
from functions.report_funcs import read_dataset_csv, read_points_csv, write_report_csv  # noqa: E402
from functions.sim_funcs import gen_inputs, kappa_bias_mc, mc_extra_sample_error, substream  # noqa: E402
from functions.util_funcs import default_seed, load_json_config, load_variables, merge_settings  # noqa: E402

logger = logging.getLogger("xsel")

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
MAX_SUBSET_FEATURES = 12
BASE_CRITERIA = ("AIC", "AICc", "BIC", "GCV")
UNSCORABLE = (SmallSampleError, InsufficientDataError)


def _csv_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in _csv_list(text)]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------


def _experiment_defaults(variables: dict, experiment: str) -> dict:
    sim = variables["simulation"]
    section = variables[experiment]
    defaults = {
        "experiment": experiment,
        "noise_variance": sim["NOISE_VARIANCE"],
        "max_redraw_fraction": sim["MAX_REDRAW_FRACTION"],
        "slab_variance": variables["bayes"]["SLAB_VARIANCE"],
        "repeats": section["REPEATS"],
        "criteria": section["CRITERIA"],
        "truth": section["TRUTH"],
    }
    if experiment == "univariate":
        defaults.update(
            n=section["N"],
            max_degree=section["MAX_DEGREE"],
            grid_start=section["GRID_START"],
            grid_stop=section["GRID_STOP"],
            grid_step=section["GRID_STEP"],
            focus_points=section["FOCUS_POINTS"],
            xaic2_test_variance=section["XAIC2_TEST_VARIANCE"],
        )
    else:
        defaults.update(n_test=section["N_TEST"], train_settings=section["TRAIN_SETTINGS"])
    return defaults


def _file_layer(args) -> dict:
    return load_json_config(args.config) if args.config else {}


def _cli_config(args, merged: dict) -> CliConfig:
    variables = load_variables()
    output_dir = Path(merged.pop("output_dir", None) or variables["general"]["OUTPUT_DIR"])
    threads = merged.pop("threads", None) or os.cpu_count() or 1
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"output directory {output_dir} is not writable: {exc}") from exc
    if not os.access(output_dir, os.W_OK):
        raise ConfigError(f"output directory {output_dir} is not writable")
    return CliConfig(
        subcommand=args.command,
        config_path=args.config,
        seed=merged["seed"],
        output_dir=output_dir,
        criteria=tuple(merged.get("criteria", ())),
        threads=threads,
    )


def resolve_experiment(args, experiment: str) -> tuple[ExperimentConfig, CliConfig]:
    """
    Merge defaults < XSEL_SEED < JSON config < flags into a validated experiment config.
    """
    variables = load_variables()
    defaults = _experiment_defaults(variables, experiment)
    defaults["seed"] = default_seed(variables)
    flags = {
        "seed": args.seed,
        "repeats": args.repeats,
        "criteria": _csv_list(args.criteria) if args.criteria else None,
        "threads": args.threads,
        "output_dir": args.output_dir,
        "xaic_regime": args.xaic_regime,
        "weighting": args.weighting,
        "noise_variance": args.noise_variance,
    }
    if experiment == "univariate":
        flags.update(
            truth=args.truth,
            n=args.n,
            max_degree=args.max_degree,
            grid_start=args.grid_start,
            grid_stop=args.grid_stop,
            grid_step=args.grid_step,
            focus_points=_float_list(args.focus_points) if args.focus_points else None,
            xaic2_test_variance=args.xaic2_variance,
            slab_variance=args.slab_variance,
        )
    else:
        flags.update(n_test=args.n_test, train_settings=_train_settings(args))
    merged = merge_settings(defaults, _file_layer(args), flags)
    cli = _cli_config(args, merged)

    known = set(ExperimentConfig.model_fields)
    unknown = sorted(set(merged) - known)
    if unknown:
        raise ConfigError(f"unknown configuration keys {unknown}")
    truth = merged.get("truth")
    allowed = ("f1", "f2") if experiment == "univariate" else ("fmulti",)
    if truth not in allowed:
        raise ConfigError(f"unknown truth {truth!r} for {experiment}; choose from {list(allowed)}")
    for setting in merged.get("train_settings", ()):
        parse_setting(setting)
    validate_roster(merged["criteria"], experiment)
    return ExperimentConfig(**merged), cli


def _train_settings(args) -> list[str] | None:
    if not args.train_dist and not args.n:
        return None
    dists = args.train_dist or ["gaussian"]
    sizes = args.n or [60]
    return [f"{d}-{n}" for d, n in itertools.product(dists, sizes)]


def _metadata(config: ExperimentConfig | None, extra: dict | None = None) -> dict:
    metadata = {"version": __version__}
    if config is not None:
        metadata.update(config.model_dump())
    metadata.update(extra or {})
    return metadata


# --------------------------------------------------------------------------
# univariate / multivariate
# --------------------------------------------------------------------------


def cmd_univariate(args) -> int:
    config, cli = resolve_experiment(args, "univariate")
    report = run_univariate(config, threads=cli.threads)
    metadata = _metadata(config)
    fig = create_risk_curve_chart(report.risk, f"Squared risk, truth {config.truth}")

    write_report_csv(report.risk, cli.output_dir / "risk_curve.csv", metadata)
    write_report_csv(report.selections, cli.output_dir / "selections.csv", metadata)
    write_report_csv(report.aggregate, cli.output_dir / "aggregate_risk.csv", metadata)
    (cli.output_dir / "figure.svg").write_text(figure_to_svg(fig), encoding="utf-8")
    print(report.selections.to_string(index=False))
    return 0


def risk_table(risk: pd.DataFrame) -> pd.DataFrame:
    """One row per criterion, a risk and an SE column per training setting."""
    wide = risk.pivot(index="criterion", columns="setting", values=["risk", "se"])
    settings = list(dict.fromkeys(risk["setting"]))
    table = pd.DataFrame({"criterion": list(dict.fromkeys(risk["criterion"]))})
    for setting in settings:
        table[setting] = wide[("risk", setting)].reindex(table["criterion"]).to_numpy()
        table[f"{setting}_se"] = wide[("se", setting)].reindex(table["criterion"]).to_numpy()
    return table


def cmd_multivariate(args) -> int:
    config, cli = resolve_experiment(args, "multivariate")
    report = run_multivariate(config, threads=cli.threads)
    metadata = _metadata(config)
    table = risk_table(report.risk)

    write_report_csv(table, cli.output_dir / "risk_table.csv", metadata)
    write_report_csv(report.selections, cli.output_dir / "selections.csv", metadata)
    print(table.to_string(index=False))
    return 0


# --------------------------------------------------------------------------
# select
# --------------------------------------------------------------------------


def _candidate_models(args, d: int) -> list[ModelSpec]:
    if args.models == "polynomial":
        if d != 1:
            raise ConfigError(f"polynomial models need exactly one feature column, got {d}")
        return [
            ModelSpec.polynomial(deg, basis_kind=args.basis, sigma2=args.sigma2)
            for deg in range(args.max_degree + 1)
        ]
    if d > MAX_SUBSET_FEATURES:
        raise ConfigError(f"all-subsets search is limited to {MAX_SUBSET_FEATURES} features, got {d}")
    return [
        ModelSpec.subset(cols, sigma2=args.sigma2)
        for size in range(d + 1)
        for cols in itertools.combinations(range(1, d + 1), size)
    ]


def parse_test_dist(text: str, d: int) -> InputDist:
    """
    ``gaussian:mean,var`` or ``uniform:lo,hi``, applied to every feature independently.

    Examples
    --------
    >>> parse_test_dist("gaussian:0,4", 1).cov
    array([[4.]])
    """
    kind, _, params = text.partition(":")
    values = _float_list(params)
    if len(values) != 2:
        raise ConfigError(f"test distribution {text!r} needs two parameters")
    try:
        if kind == "gaussian":
            return InputDist.gaussian(np.full(d, values[0]), values[1] * np.eye(d))
        if kind == "uniform":
            return InputDist.uniform_box(d, lo=values[0], hi=values[1])
    except ValidationError as exc:
        raise ConfigError(f"invalid test distribution {text!r}: {exc}") from None
    raise ConfigError(f"unknown test distribution {kind!r}; use gaussian:mean,var or uniform:lo,hi")


def _test_regime(args, d: int, features: list[str]) -> TestInputSpec | None:
    chosen = [flag for flag in ("test_csv", "test_dist", "smoothed", "empirical") if getattr(args, flag)]
    if len(chosen) > 1:
        raise ConfigError(f"choose one test-input regime, got {chosen}")
    if args.test_csv:
        return TestInputSpec(variant="explicit", points=read_points_csv(args.test_csv, features))
    if args.test_dist:
        return TestInputSpec(variant="distribution", input_dist=parse_test_dist(args.test_dist, d))
    if args.smoothed:
        return TestInputSpec(variant="empirical_smoothed")
    if args.empirical:
        return TestInputSpec(variant="empirical")
    return None


def _focus_points(args, d: int) -> np.ndarray | None:
    if not args.focus:
        return None
    points = [_float_list(text) for text in args.focus]
    bad = [p for p in points if len(p) != d]
    if bad:
        raise ConfigError(f"focus points need {d} coordinates, got {bad}")
    return np.array(points, dtype=float)


def _scored(name, fits, kappa_of=None) -> list[tuple]:
    """(score, fit entry) pairs for ``name``; models it cannot score are left out."""
    pairs = []
    for entry in fits:
        model_id, spec, design, fit = entry
        try:
            kappa = kappa_of(design, spec) if kappa_of is not None else None
            pairs.append((score_criterion(name, fit, kappa=kappa, model_id=model_id), entry))
        except UNSCORABLE as exc:
            logger.warning("%s: excluding model %d (%s): %s", name, model_id, spec.label, exc)
    return pairs


def _score_rows(name, focus_label, pairs) -> list[dict]:
    if not pairs:
        logger.warning("%s: no candidate model can be scored; skipping", name)
        return []
    scores = [score for score, _ in pairs]
    weights = akaike_weights(scores) if name != "GCV" else np.full(len(scores), np.nan)
    chosen = select(scores)
    rows = []
    for score, weight, (model_id, spec, _, fit) in zip(scores, weights, [entry for _, entry in pairs]):
        rows.append(
            {
                "criterion": name,
                "focus": focus_label,
                "model_id": model_id,
                "model": spec.label,
                "value": score.value,
                "log_lik": fit.log_lik,
                "penalty_k": score.penalty_k,
                "penalty_kappa": score.penalty_kappa,
                "small_sample_term": score.small_sample_term,
                "likelihood_constant": score.likelihood_constant,
                "weight": weight,
                "selected": int(model_id == chosen),
            }
        )
    return rows


def cmd_select(args) -> int:
    variables = load_variables()
    seed = args.seed if args.seed is not None else default_seed(variables)
    file_layer = _file_layer(args)
    merged = merge_settings(
        {"seed": seed}, file_layer, {"output_dir": args.output_dir, "threads": 1}
    )
    cli = _cli_config(args, merged)
    dataset, features = read_dataset_csv(args.train_csv)
    specs = _candidate_models(args, dataset.d)
    regime = _test_regime(args, dataset.d, features)
    focus = _focus_points(args, dataset.d)

    if args.criteria:
        criteria = _csv_list(args.criteria)
    else:
        criteria = list(BASE_CRITERIA)
        criteria += ["XAIC", "XAICc"] if regime is not None else []
        criteria += ["FAIC", "FAICc"] if focus is not None else []
    for name in criteria:
        if name in ("XAIC", "XAICc") and regime is None:
            raise ConfigError(f"{name} needs a test-input regime (--test-csv, --test-dist, --smoothed or --empirical)")
        if name in ("FAIC", "FAICc") and focus is None:
            raise ConfigError(f"{name} needs at least one --focus point")
        if name not in BASE_CRITERIA and name not in KAPPA_CRITERIA:
            raise ConfigError(f"unknown criterion {name!r}")

    fits = []
    for model_id, spec in enumerate(specs, start=1):
        try:
            design = build_design(spec, dataset.X)
            fits.append((model_id, spec, design, fit_ols(design, dataset.Y, spec)))
        except FIT_FAILURES as exc:
            logger.warning("excluding model %d (%s): %s", model_id, spec.label, exc)
    if not fits:
        raise InvalidArgumentError("no candidate model could be fitted")

    rows = []
    for name in criteria:
        if name in ("FAIC", "FAICc"):
            for point in focus:
                at_point = TestInputSpec(variant="focus", points=point[np.newaxis, :])
                pairs = _scored(
                    name, fits, lambda design, spec: float(kappa_for_regime(design, spec, at_point)[0])
                )
                rows += _score_rows(name, ";".join(f"{v:g}" for v in point), pairs)
        elif name in ("XAIC", "XAICc"):

            def regime_kappa(design, spec):
                return kappa_for_regime(design, spec, regime, train_inputs=dataset.X, seed=cli.seed)

            rows += _score_rows(name, "", _scored(name, fits, regime_kappa))
        else:
            rows += _score_rows(name, "", _scored(name, fits))
    if not rows:
        raise InvalidArgumentError("no candidate model could be scored under any criterion")

    table = pd.DataFrame(rows)
    metadata = {
        "version": __version__,
        "seed": cli.seed,
        "train_csv": args.train_csv,
        "models": args.models,
        "basis": args.basis,
        "max_degree": args.max_degree,
        "sigma2": args.sigma2,
        "regime": regime.variant if regime is not None else "none",
        "criteria": criteria,
    }
    write_report_csv(table, cli.output_dir / "scores.csv", metadata)
    chosen = table[table["selected"] == 1][["criterion", "focus", "model_id", "model"]]
    print(chosen.to_string(index=False))
    return 0


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def _estimate_row(claim: str, estimate, se_multiple: float) -> dict:
    return {
        "claim": claim,
        "estimate": estimate.estimate,
        "se": estimate.se,
        "target": estimate.rhs_estimate,
        "diff": estimate.diff,
        "diff_se": estimate.diff_se,
        "passed": estimate.agrees(se_multiple),
    }


def verify_suite(seed: int, reps: int, kappa_offset: float = 0.0) -> pd.DataFrame:
    """
    Run the oracle checks and return one row per claim.

    - known_variance: known-variance degree-2 model, XAIC right-hand side is exact.
    - unknown_variance: unknown-variance degree-2 model (k = 4), XAICc right-hand side is exact.
    - in_sample: test inputs equal to the training inputs give the 2k gap.
    - ladder_k*: nested Gaussian-input models, E[kappa_x] grows by more than 1 per column.
    - rademacher: intercept-only model on +-1 inputs, E[kappa_x] = 1.
    """
    v = load_variables()["verify"]
    noise = load_variables()["simulation"]["NOISE_VARIANCE"]
    m = float(v["SE_MULTIPLE"])
    truth = TrueModel(name="f1", noise_variance=noise)
    train_dist = InputDist.standard_gaussian()
    test_dist = InputDist.standard_gaussian(variance=4.0)
    rows = []

    known = ModelSpec.polynomial(int(v["KNOWN_DEGREE"]), sigma2=noise)
    X = gen_inputs(train_dist, int(v["KNOWN_N"]), substream(seed, 0, "verify-known-variance-inputs"))
    X_prime = gen_inputs(test_dist, int(v["KNOWN_N_TEST"]), substream(seed, 1, "verify-known-variance-inputs"))
    est = mc_extra_sample_error(
        known, X, X_prime, truth, reps, substream(seed, 0, "verify-known-variance"), kappa_offset=kappa_offset
    )
    rows.append(_estimate_row("known_variance", est, m))

    unknown = ModelSpec.polynomial(int(v["UNKNOWN_DEGREE"]))
    X = gen_inputs(train_dist, int(v["UNKNOWN_N"]), substream(seed, 0, "verify-unknown-variance-inputs"))
    X_prime = gen_inputs(test_dist, int(v["UNKNOWN_N_TEST"]), substream(seed, 1, "verify-unknown-variance-inputs"))
    est = mc_extra_sample_error(
        unknown, X, X_prime, truth, reps, substream(seed, 0, "verify-unknown-variance"), kappa_offset=kappa_offset
    )
    rows.append(_estimate_row("unknown_variance", est, m))

    X = gen_inputs(train_dist, int(v["KNOWN_N"]), substream(seed, 0, "verify-in-sample-inputs"))
    est = mc_extra_sample_error(known, X, X, truth, reps, substream(seed, 0, "verify-in-sample"))
    row = _estimate_row("in_sample", est, m)
    row["target"] = est.train_term + 2 * known.k
    rows.append(row)

    ladder = [ModelSpec.subset(range(1, j + 1), sigma2=noise) for j in range(4)]
    frame = kappa_bias_mc(
        ladder, InputDist.standard_gaussian(3), int(v["LADDER_N"]), reps, substream(seed, 0, "verify-ladder")
    )
    for _, r in frame.iloc[1:].iterrows():
        rows.append(
            {
                "claim": f"ladder_k{int(r['k_mu'])}",
                "estimate": r["mean_kappa"],
                "se": r["se"],
                "target": 1.0,
                "diff": r["diff"],
                "diff_se": r["diff_se"],
                "passed": bool(r["diff"] - 1.0 > m * r["diff_se"]),
            }
        )

    frame = kappa_bias_mc(
        [ModelSpec.subset([], sigma2=noise)],
        InputDist.rademacher(1),
        int(v["LADDER_N"]),
        reps,
        substream(seed, 0, "verify-rademacher"),
    )
    r = frame.iloc[0]
    gap = r["mean_kappa"] - 1.0
    rows.append(
        {
            "claim": "rademacher",
            "estimate": r["mean_kappa"],
            "se": r["se"],
            "target": 1.0,
            "diff": gap,
            "diff_se": r["se"],
            "passed": bool(abs(gap) <= max(m * r["se"], 1e-12)),
        }
    )
    return pd.DataFrame(rows)


def cmd_verify(args) -> int:
    variables = load_variables()
    seed = args.seed if args.seed is not None else default_seed(variables)
    reps = args.reps if args.reps is not None else int(variables["verify"]["REPS"])
    merged = merge_settings({"seed": seed}, _file_layer(args), {"output_dir": args.output_dir, "threads": 1})
    cli = _cli_config(args, merged)
    if reps < int(variables["verify"]["MIN_REPS"]):
        logger.warning("reps=%d: standard errors are too wide for a meaningful check", reps)

    table = verify_suite(cli.seed, reps, kappa_offset=args.kappa_offset)
    write_report_csv(table, cli.output_dir / "verify.csv", {"version": __version__, "seed": cli.seed, "reps": reps})
    for _, row in table.iterrows():
        print(
            f"{row['claim']:<12} {format_verdict(row['passed'])}  "
            f"estimate {format_estimate(row['estimate'], row['se'])}  "
            f"diff {format_estimate(row['diff'], row['diff_se'])}"
        )
    return 0 if bool(table["passed"].all()) else 3


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=Path, help="JSON config file; flags win on conflict")
    parser.add_argument("--seed", type=int, help="random seed (default: XSEL_SEED or 7)")
    parser.add_argument("--output-dir", type=Path, help="directory for reports (default: results)")
    parser.add_argument("--threads", type=int, help="worker threads (default: available CPUs)")
    parser.add_argument("--log-level", default="WARNING", type=str.upper, choices=LOG_LEVELS)


def _experiment_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--repeats", type=int)
    parser.add_argument("--criteria", help="comma-separated criteria roster")
    parser.add_argument("--xaic-regime", choices=("distribution", "empirical"))
    parser.add_argument("--weighting", action="store_const", const=True, help="add Akaike-weighted variants")
    parser.add_argument("--noise-variance", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xsel", description=__doc__.splitlines()[1].strip())
    parser.add_argument("--version", action="version", version=f"xsel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    uni = sub.add_parser("univariate", help="polynomial selection experiment")
    _common(uni)
    _experiment_flags(uni)
    uni.add_argument("--truth", help=f"true function: {', '.join(TRUTH_NAMES[:2])}")
    uni.add_argument("--n", type=int, help="training size")
    uni.add_argument("--max-degree", type=int)
    uni.add_argument("--grid-start", type=float)
    uni.add_argument("--grid-stop", type=float)
    uni.add_argument("--grid-step", type=float)
    uni.add_argument("--focus-points", help="comma-separated x values for focused selection rows")
    uni.add_argument("--xaic2-variance", type=float, help="test variance of XAICc2")
    uni.add_argument("--slab-variance", type=float, help="coefficient prior variance for BMS/BMA")
    uni.set_defaults(func=cmd_univariate)

    multi = sub.add_parser("multivariate", help="all-subsets selection experiment")
    _common(multi)
    _experiment_flags(multi)
    multi.add_argument("--train-dist", action="append", help="gaussian, uniform or spike-slab (repeatable)")
    multi.add_argument("--n", type=int, action="append", help="training size (repeatable)")
    multi.add_argument("--n-test", type=int)
    multi.set_defaults(func=cmd_multivariate)

    sel = sub.add_parser("select", help="score candidate models for a CSV dataset")
    _common(sel)
    sel.add_argument("train_csv", help="headered CSV, response in the last column")
    sel.add_argument("--models", choices=("subsets", "polynomial"), default="subsets")
    sel.add_argument("--basis", choices=("monomial", "hermite"), default="monomial")
    sel.add_argument("--max-degree", type=int, default=6)
    sel.add_argument("--sigma2", type=float, help="known noise variance")
    sel.add_argument("--criteria", help="comma-separated criteria")
    sel.add_argument("--test-csv", help="explicit test inputs")
    sel.add_argument("--test-dist", help="gaussian:mean,var or uniform:lo,hi")
    sel.add_argument("--focus", action="append", help="focus point x1,...,xd (repeatable)")
    sel.add_argument("--smoothed", action="store_true", help="moment-matched Gaussian of the training inputs")
    sel.add_argument("--empirical", action="store_true", help="empirical training distribution (AIC)")
    sel.set_defaults(func=cmd_select)

    ver = sub.add_parser("verify", help="Monte Carlo checks of the penalty identities")
    _common(ver)
    ver.add_argument("--reps", type=int)
    ver.add_argument("--kappa-offset", type=float, default=0.0, help=argparse.SUPPRESS)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(args.log_level)
    try:
        return args.func(args)
    except (ConfigError, DatasetFormatError, ValidationError) as exc:
        print(f"xsel: error: {exc}", file=sys.stderr)
        return 2
    except (XselError, ValueError, OSError) as exc:
        print(f"xsel: failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
