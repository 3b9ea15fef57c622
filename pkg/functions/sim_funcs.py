# -*- coding: utf-8 -*-
"""
Seeded data generation and Monte Carlo oracles.

Every random draw comes from ``substream``: a PCG64 generator keyed by
(seed, repeat, purpose tag, attempt) through ``numpy.random.SeedSequence``,
so a replicate draws the same numbers whichever thread runs it.
"""

import logging
import math
import sys
import zlib
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import linalg

project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from classes.errors import (  # noqa: E402
    DimensionMismatchError,
    InvalidArgumentError,
    SimulationError,
)
from classes.linear_models import ModelSpec  # noqa: E402
from classes.sim_models import ExtraSampleEstimate, InputDist, TrueModel  # noqa: E402
from functions.criteria_funcs import kappa_explicit  # noqa: E402
from functions.linear_funcs import DEGENERATE_RSS, SINGULAR_TOL, build_design, qr_factor  # noqa: E402
from functions.util_funcs import load_variables  # noqa: E402

logger = logging.getLogger(__name__)

MIN_REPS = int(load_variables()["verify"]["MIN_REPS"])
BATCH_SIZE = 20_000
_MAX_REJECTED_BATCHES = 50


def tag_key(tag: str) -> int:
    """Stable integer key of a purpose tag."""
    return zlib.crc32(tag.encode("utf-8"))


def substream(seed: int, repeat: int, tag: str, attempt: int = 0) -> np.random.Generator:
    """
    Independent generator for one (seed, repeat, purpose, attempt).

    Examples
    --------
    >>> a = substream(7, 0, "train").standard_normal()
    >>> b = substream(7, 0, "train").standard_normal()
    >>> a == b
    True
    """
    if seed < 0 or repeat < 0 or attempt < 0:
        raise InvalidArgumentError("seed, repeat and attempt must be non-negative")
    sequence = np.random.SeedSequence(seed, spawn_key=(repeat, tag_key(tag), attempt))
    return np.random.Generator(np.random.PCG64(sequence))


def _cov_factor(cov: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        eigvals, eigvecs = np.linalg.eigh(cov)
        return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def gen_inputs(dist: InputDist, n: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw ``n`` iid raw inputs.

    Gaussian draws are ``standard_normal((n, d)) @ L.T + mean``, so a larger
    draw from the same generator state extends a smaller one row by row.

    Parameters
    ----------
    dist : InputDist
    n : int
    rng : np.random.Generator

    Returns
    -------
    np.ndarray
        Shape (n, dist.dim).
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be at least 1, got {n}")
    d = dist.dim
    if dist.kind == "gaussian":
        z = rng.standard_normal((n, d))
        return z @ _cov_factor(dist.cov).T + dist.mean
    if dist.kind == "uniform_box":
        return dist.lo + (dist.hi - dist.lo) * rng.random((n, d))
    if dist.kind == "spike_slab":
        component = rng.integers(0, 2, size=n)
        z = rng.standard_normal((n, d))
        spike = z @ _cov_factor(dist.slab_covs[0]).T
        slab = z @ _cov_factor(dist.slab_covs[1]).T
        return np.where(component[:, np.newaxis] == 0, spike, slab)
    return rng.choice(np.array([-1.0, 1.0]), size=(n, d))


def gen_outputs(truth: TrueModel, inputs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Y = f(inputs) + N(0, noise_variance) noise."""
    mean = truth.f(inputs)
    return mean + math.sqrt(truth.noise_variance) * rng.standard_normal(mean.shape[0])


def squared_risk(prediction, truth_value):
    """
    (prediction - truth_value)^2; floats or numpy arrays (element-wise).

    Examples
    --------
    >>> squared_risk(3.0, 5.0)
    4.0
    """
    return (prediction - truth_value) ** 2


def _neg2_loglik(residual_ss: np.ndarray, count: int, sigma2: np.ndarray) -> np.ndarray:
    return count * np.log(2 * np.pi * sigma2) + residual_ss / sigma2


def mc_extra_sample_error(
    spec: ModelSpec,
    X: np.ndarray,
    X_prime: np.ndarray,
    truth: TrueModel,
    reps: int,
    rng: np.random.Generator,
    kappa_offset: float = 0.0,
) -> ExtraSampleEstimate:
    """
    Monte Carlo extra-sample error at fixed inputs against the XAIC(c) right-hand side.

    Each replicate draws fresh (Y, Y') from ``truth``, fits ``spec`` on (X, Y) and
    scores -2 (n/n') log g(Y' | X', theta_hat). On the same replicate the
    right-hand side is -2 log g(Y | X, theta_hat) + k + kappa (known variance) or
    its small-sample corrected form (unknown variance).

    Parameters
    ----------
    spec : ModelSpec
    X, X_prime : np.ndarray
        Raw training and test inputs, held fixed over replicates.
    truth : TrueModel
    reps : int
        Replicates; below 1000 the standard errors are too wide to test against.
    rng : np.random.Generator
    kappa_offset : float
        Added to kappa on the right-hand side (sensitivity checks only).

    Returns
    -------
    ExtraSampleEstimate
        Means of both sides and the SE of their paired difference.
    """
    if reps < 2:
        raise InvalidArgumentError(f"reps must be at least 2, got {reps}")
    if reps < MIN_REPS:
        logger.warning("reps=%d is below %d; standard errors will be too wide", reps, MIN_REPS)

    design = build_design(spec, X)
    test_design = build_design(spec, X_prime)
    n, n_prime, k = design.n, test_design.n, spec.k
    Q, R = qr_factor(design.values)
    mean_train = truth.f(X)
    mean_test = truth.f(X_prime)
    if mean_train.shape[0] != n or mean_test.shape[0] != n_prime:
        raise DimensionMismatchError("truth evaluation does not match the input rows")

    kappa = kappa_explicit(design, test_design, spec.variance_mode) + kappa_offset
    penalty = k + kappa
    if spec.variance_mode == "unknown":
        if n - k - 1 < 1:
            raise InvalidArgumentError(f"n - k - 1 must be at least 1, got n={n}, k={k}")
        penalty += (k + kappa) * (k + 1) / (n - k - 1)
    noise_sd = math.sqrt(truth.noise_variance)

    lhs, train, rejected = [], [], 0
    collected, empty_batches = 0, 0
    while collected < reps:
        batch = min(BATCH_SIZE, reps - collected)
        Y = mean_train + noise_sd * rng.standard_normal((batch, n))
        Y_prime = mean_test + noise_sd * rng.standard_normal((batch, n_prime))
        coef = linalg.solve_triangular(R, Q.T @ Y.T)
        rss = np.sum((Y - (design.values @ coef).T) ** 2, axis=1)
        test_ss = np.sum((Y_prime - (test_design.values @ coef).T) ** 2, axis=1)

        if spec.variance_mode == "unknown":
            keep = rss >= DEGENERATE_RSS
            rejected += int(batch - keep.sum())
            rss, test_ss = rss[keep], test_ss[keep]
            sigma2 = rss / n
        else:
            sigma2 = np.full(rss.shape, spec.known_sigma2)
        if rss.size == 0:
            empty_batches += 1
            if empty_batches > _MAX_REJECTED_BATCHES:
                raise SimulationError("every replicate gave a degenerate fit")
            continue

        lhs.append(n / n_prime * _neg2_loglik(test_ss, n_prime, sigma2))
        train.append(_neg2_loglik(rss, n, sigma2))
        collected += rss.size

    lhs = np.concatenate(lhs)[:reps]
    train = np.concatenate(train)[:reps]
    rhs = train + penalty
    diff = lhs - rhs
    root = math.sqrt(reps)
    if rejected:
        logger.warning("rejected and redrew %d degenerate replicates", rejected)
    logger.debug("extra-sample oracle: lhs=%.6g rhs=%.6g kappa=%.6g", lhs.mean(), rhs.mean(), kappa)
    return ExtraSampleEstimate(
        estimate=float(lhs.mean()),
        se=float(lhs.std(ddof=1) / root),
        rhs_estimate=float(rhs.mean()),
        rhs_se=float(rhs.std(ddof=1) / root),
        train_term=float(train.mean()),
        diff=float(diff.mean()),
        diff_se=float(diff.std(ddof=1) / root),
        reps=reps,
        rejected=rejected,
    )


def _batch_focus_kappa(spec: ModelSpec, U: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    B, n, d = U.shape
    D = build_design(spec, U.reshape(B * n, d)).values.reshape(B, n, -1)
    xd = build_design(spec, x).values
    gram = np.einsum("bij,bik->bjk", D, D)
    eigvals = np.linalg.eigvalsh(gram)
    ok = eigvals[:, 0] > (SINGULAR_TOL**2) * eigvals[:, -1]
    safe = np.where(ok[:, np.newaxis, np.newaxis], gram, np.eye(gram.shape[1]))
    sol = np.linalg.solve(safe, xd[..., np.newaxis])[..., 0]
    return n * np.sum(sol * xd, axis=1), ok


def kappa_bias_mc(
    model_ladder,
    input_dist: InputDist,
    n: int,
    reps: int,
    rng: np.random.Generator,
) -> pd.DataFrame:
    """
    Monte Carlo E[kappa_x] (known variance) over fresh training inputs and test point.

    All models in the ladder see the same draws, so consecutive differences
    are paired.

    Parameters
    ----------
    model_ladder : list of ModelSpec
        Nested models, smallest first.
    input_dist : InputDist
        Distribution of both training and test inputs.
    n : int
        Training size.
    reps : int
    rng : np.random.Generator

    Returns
    -------
    pd.DataFrame
        Columns model, k_mu, mean_kappa, se, diff, diff_se (diff against the
        previous model; NaN on the first row).
    """
    model_ladder = list(model_ladder)
    if not model_ladder:
        raise InvalidArgumentError("the model ladder is empty")
    if reps < 2:
        raise InvalidArgumentError(f"reps must be at least 2, got {reps}")
    if reps < MIN_REPS:
        logger.warning("reps=%d is below %d; standard errors will be too wide", reps, MIN_REPS)
    if any(spec.k_mu > n for spec in model_ladder):
        raise InvalidArgumentError(f"training size {n} is below the largest model")

    chunks = [[] for _ in model_ladder]
    collected, rejected, empty_batches = 0, 0, 0
    while collected < reps:
        batch = min(BATCH_SIZE, reps - collected)
        U = gen_inputs(input_dist, batch * n, rng).reshape(batch, n, input_dist.dim)
        x = gen_inputs(input_dist, batch, rng)
        results = [_batch_focus_kappa(spec, U, x) for spec in model_ladder]
        ok = np.logical_and.reduce([r[1] for r in results])
        rejected += int(batch - ok.sum())
        if not ok.any():
            empty_batches += 1
            if empty_batches > _MAX_REJECTED_BATCHES:
                raise SimulationError("every training draw gave a singular design")
            continue
        for store, (kappa, _) in zip(chunks, results):
            store.append(kappa[ok])
        collected += int(ok.sum())

    if rejected:
        logger.warning("rejected %d draws with singular designs", rejected)
    kappas = [np.concatenate(store)[:reps] for store in chunks]
    root = math.sqrt(reps)
    rows = []
    for i, (spec, kappa) in enumerate(zip(model_ladder, kappas)):
        row = {
            "model": spec.label,
            "k_mu": spec.k_mu,
            "mean_kappa": float(kappa.mean()),
            "se": float(kappa.std(ddof=1) / root),
            "diff": np.nan,
            "diff_se": np.nan,
        }
        if i > 0:
            delta = kappa - kappas[i - 1]
            row["diff"] = float(delta.mean())
            row["diff_se"] = float(delta.std(ddof=1) / root)
        rows.append(row)
    return pd.DataFrame(rows)
