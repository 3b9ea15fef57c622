# -*- coding: utf-8 -*-
"""
Extra-sample penalty kappa in its test-input regimes, and the information
criteria built on it.

Every criterion returns a ``CriterionScore`` whose value is minimised. For the
likelihood criteria the value is -2 log-likelihood plus the penalty terms
recorded on the score.
"""

import logging
import math
import sys
from pathlib import Path

import numpy as np
from numpy.polynomial import hermite_e
from scipy import stats

project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from classes.criteria_models import CriterionScore, TestInputSpec  # noqa: E402
from classes.errors import (  # noqa: E402
    DimensionMismatchError,
    IncomparableScoresError,
    InsufficientDataError,
    InvalidArgumentError,
    NotPositiveSemidefiniteError,
    SmallSampleError,
)
from classes.linear_models import DesignMatrix, FitResult, ModelSpec, VarianceMode  # noqa: E402
from classes.sim_models import InputDist  # noqa: E402
from functions.linear_funcs import build_design, gram_inverse  # noqa: E402
from functions.util_funcs import load_variables  # noqa: E402

logger = logging.getLogger(__name__)

_CRITERIA = load_variables()["criteria"]
SYMMETRY_TOL = float(_CRITERIA["SYMMETRY_TOL"])
PSD_TOL = float(_CRITERIA["PSD_TOL"])
MC_SECOND_MOMENT_DRAWS = int(_CRITERIA["MC_SECOND_MOMENT_DRAWS"])
CLOSED_FORM_MAX_DEGREE = int(_CRITERIA["CLOSED_FORM_MAX_DEGREE"])


def _variance_extra(variance_mode: VarianceMode) -> int:
    if variance_mode not in ("known", "unknown"):
        raise InvalidArgumentError(f"unknown variance mode {variance_mode!r}")
    return int(variance_mode == "unknown")


# --------------------------------------------------------------------------
# kappa
# --------------------------------------------------------------------------


def kappa_explicit(
    design: DesignMatrix, test_design: DesignMatrix, variance_mode: VarianceMode
) -> float:
    """
    Penalty for an explicit test design X'.

    kappa = (n / n') trace(X'^T X' (X^T X)^-1), plus one when sigma^2 is estimated.

    Parameters
    ----------
    design : DesignMatrix
        Training design X (n x k_mu).
    test_design : DesignMatrix
        Test design X' (n' x k_mu) built with the same basis.
    variance_mode : {"known", "unknown"}

    Returns
    -------
    float

    Examples
    --------
    >>> X = DesignMatrix(values=np.eye(3))
    >>> kappa_explicit(X, X, "known")
    3.0
    """
    if test_design.k_mu != design.k_mu:
        raise DimensionMismatchError(
            f"test design has {test_design.k_mu} columns, training design has {design.k_mu}"
        )
    G = gram_inverse(design)
    Xp = test_design.values
    trace = float(np.sum((Xp @ G) * Xp))
    return design.n / test_design.n * trace + _variance_extra(variance_mode)


def kappa_focus_points(
    design: DesignMatrix,
    points: np.ndarray,
    variance_mode: VarianceMode,
    gram_inv: np.ndarray | None = None,
) -> np.ndarray:
    """
    Focused penalty n x^T (X^T X)^-1 x (+1) for every row x of ``points``.

    ``gram_inv`` may be passed in when it is already known from a fit.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != design.k_mu:
        raise DimensionMismatchError(
            f"design vectors have length {points.shape[1]}, model has {design.k_mu} columns"
        )
    G = gram_inverse(design) if gram_inv is None else gram_inv
    quad = np.einsum("ij,jk,ik->i", points, G, points)
    return design.n * quad + _variance_extra(variance_mode)


def kappa_focus(design: DesignMatrix, x: np.ndarray, variance_mode: VarianceMode) -> float:
    """
    Penalty when X' is the single design vector ``x``.

    Examples
    --------
    >>> X = DesignMatrix(values=np.sqrt(2.0) * np.eye(2))
    >>> kappa_focus(X, np.zeros(2), "unknown")
    1.0
    """
    x = np.asarray(x, dtype=float).ravel()
    return float(kappa_focus_points(design, x[np.newaxis, :], variance_mode)[0])


def check_second_moment(second_moment: np.ndarray, k_mu: int) -> np.ndarray:
    """Validate a design-basis second-moment matrix (shape, symmetry, PSD)."""
    M = np.atleast_2d(np.asarray(second_moment, dtype=float))
    if M.shape != (k_mu, k_mu):
        raise DimensionMismatchError(f"second moment must be {k_mu}x{k_mu}, got {M.shape}")
    scale = max(1.0, float(np.abs(M).max()))
    if np.abs(M - M.T).max() > SYMMETRY_TOL * scale:
        raise NotPositiveSemidefiniteError("second moment is not symmetric")
    if np.linalg.eigvalsh((M + M.T) / 2).min() < -PSD_TOL * scale:
        raise NotPositiveSemidefiniteError("second moment is not positive semidefinite")
    return M


def kappa_distribution(
    design: DesignMatrix, second_moment: np.ndarray, variance_mode: VarianceMode
) -> float:
    """
    Expected focused penalty under a test-input distribution.

    kappa = n trace(E[x x^T] (X^T X)^-1), plus one when sigma^2 is estimated.

    Parameters
    ----------
    design : DesignMatrix
        Training design X.
    second_moment : np.ndarray
        E[x x^T] in the model's design-vector basis (k_mu x k_mu).
    variance_mode : {"known", "unknown"}
    """
    M = check_second_moment(second_moment, design.k_mu)
    G = gram_inverse(design)
    return design.n * float(np.sum(M * G)) + _variance_extra(variance_mode)


def kappa_empirical(design: DesignMatrix, variance_mode: VarianceMode) -> float:
    """
    Penalty under the empirical distribution of the training inputs.

    trace((X^T X / n)(X^T X)^-1) n = k_mu exactly, so the count is returned
    directly and XAIC coincides with AIC bit for bit.
    """
    return float(design.k_mu + _variance_extra(variance_mode))


def empirical_second_moment(design: DesignMatrix) -> np.ndarray:
    """X^T X / n, the second moment of the empirical input distribution."""
    X = design.values
    return X.T @ X / design.n


def _raw_moments(dist: InputDist, max_power: int) -> np.ndarray:
    powers = range(max_power + 1)
    if dist.kind == "gaussian":
        loc, scale = float(dist.mean[0]), math.sqrt(float(dist.cov[0, 0]))
        return np.array([stats.norm.moment(p, loc=loc, scale=scale) for p in powers])
    if dist.kind == "uniform_box":
        lo, hi = float(dist.lo[0]), float(dist.hi[0])
        return np.array([stats.uniform.moment(p, loc=lo, scale=hi - lo) for p in powers])
    if dist.kind == "spike_slab":
        scales = [math.sqrt(float(c[0, 0])) for c in dist.slab_covs]
        return np.array(
            [0.5 * sum(stats.norm.moment(p, scale=s) for s in scales) for p in powers]
        )
    return np.array([1.0 if p % 2 == 0 else 0.0 for p in powers])


def _hermite_to_power(degree: int) -> np.ndarray:
    C = np.zeros((degree + 1, degree + 1))
    for j in range(degree + 1):
        coefs = hermite_e.herme2poly(np.eye(degree + 1)[j])
        C[j, : coefs.shape[0]] = coefs
    return C


def second_moment_for_spec(
    spec: ModelSpec, input_dist: InputDist, seed: int | None = None
) -> np.ndarray:
    """
    E[x x^T] of the design vector of ``spec`` when raw inputs follow ``input_dist``.

    Closed forms: polynomial bases up to ``CLOSED_FORM_MAX_DEGREE`` use the raw
    moments of the (one-dimensional) distribution, Hermite bases are mapped from
    monomials by their coefficient matrix; subset bases only need the mean and
    covariance. Higher polynomial degrees fall back to a Monte Carlo average over
    ``MC_SECOND_MOMENT_DRAWS`` draws from the ``seed`` substream (default seed
    from variables.toml when omitted), logged at INFO with the seed used.

    Examples
    --------
    >>> second_moment_for_spec(ModelSpec.polynomial(2), InputDist.standard_gaussian())
    array([[1., 0., 1.],
           [0., 1., 0.],
           [1., 0., 3.]])
    """
    if spec.basis == "polynomial":
        if input_dist.dim != 1:
            raise InvalidArgumentError(
                f"polynomial models need a one-dimensional input distribution, got dim={input_dist.dim}"
            )
        degree = spec.degree
        if degree > CLOSED_FORM_MAX_DEGREE:
            return _sampled_second_moment(spec, input_dist, seed)
        moments = _raw_moments(input_dist, 2 * degree)
        idx = np.add.outer(np.arange(degree + 1), np.arange(degree + 1))
        M = moments[idx]
        if spec.basis_kind == "hermite":
            C = _hermite_to_power(degree)
            M = C @ M @ C.T
        return M

    cols = np.array(spec.columns, dtype=int) - 1
    if cols.size and cols.max() >= input_dist.dim:
        raise InvalidArgumentError(
            f"subset {spec.columns} exceeds the input dimension {input_dist.dim}"
        )
    mean, cov = input_dist.moments
    m = mean[cols]
    inner = cov[np.ix_(cols, cols)] + np.outer(m, m)
    if not spec.include_intercept:
        return inner
    k_mu = cols.size + 1
    M = np.empty((k_mu, k_mu))
    M[0, 0] = 1.0
    M[0, 1:] = m
    M[1:, 0] = m
    M[1:, 1:] = inner
    return M


def second_moment_monte_carlo(spec: ModelSpec, samples: np.ndarray) -> np.ndarray:
    """Monte Carlo E[x x^T] from raw input draws (used where no closed form applies)."""
    design = build_design(spec, samples)
    return empirical_second_moment(design)


def _sampled_second_moment(spec: ModelSpec, input_dist: InputDist, seed: int | None) -> np.ndarray:
    # deferred: sim_funcs imports this module
    from functions.sim_funcs import gen_inputs, substream

    if seed is None:
        seed = int(load_variables()["general"]["SEED"])
    logger.info(
        "no closed-form second moment for %s; averaging %d draws (seed %d)",
        spec.label, MC_SECOND_MOMENT_DRAWS, seed,
    )
    samples = gen_inputs(input_dist, MC_SECOND_MOMENT_DRAWS, substream(seed, 0, "second-moment"))
    return second_moment_monte_carlo(spec, samples[:, 0])


def smoothed_input_dist(raw_inputs: np.ndarray) -> InputDist:
    """
    Moment-matched Gaussian of the raw training inputs.

    kappa depends on the test distribution only through E[x x^T], so matching
    the first two moments is enough for polynomial degree <= 1 and subset models.
    """
    U = np.asarray(raw_inputs, dtype=float)
    if U.ndim == 1:
        U = U[:, np.newaxis]
    mean = U.mean(axis=0)
    cov = np.atleast_2d(np.cov(U, rowvar=False, bias=True))
    return InputDist.gaussian(mean, cov)


def kappa_for_regime(
    design: DesignMatrix,
    spec: ModelSpec,
    test_input: TestInputSpec,
    train_inputs: np.ndarray | None = None,
    seed: int | None = None,
) -> float | np.ndarray:
    """
    kappa for a model under any test-input regime.

    Returns an array (one value per focus point) in the focus regime and a float otherwise.
    ``seed`` is passed to ``second_moment_for_spec`` for its Monte Carlo fallback.
    """
    mode = spec.variance_mode
    if test_input.variant == "explicit":
        return kappa_explicit(design, build_design(spec, test_input.points), mode)
    if test_input.variant == "focus":
        return kappa_focus_points(design, build_design(spec, test_input.points).values, mode)
    if test_input.variant == "empirical":
        return kappa_empirical(design, mode)
    if test_input.variant == "distribution":
        if test_input.second_moment is not None:
            M = test_input.second_moment
        else:
            M = second_moment_for_spec(spec, test_input.input_dist, seed=seed)
        return kappa_distribution(design, M, mode)
    if train_inputs is None:
        raise InvalidArgumentError("the smoothed regime needs the raw training inputs")
    dist = smoothed_input_dist(train_inputs)
    return kappa_distribution(design, second_moment_for_spec(spec, dist, seed=seed), mode)


# --------------------------------------------------------------------------
# criteria
# --------------------------------------------------------------------------


def _likelihood_constant(fit: FitResult) -> float | None:
    if fit.variance_mode != "known":
        return None
    return fit.n * math.log(2 * math.pi * fit.sigma2_hat)


def _small_sample_denominator(fit: FitResult) -> int:
    denominator = fit.n - fit.k - 1
    if denominator < 1:
        raise SmallSampleError(
            f"small-sample correction needs n - k - 1 >= 1, got n={fit.n}, k={fit.k}"
        )
    return denominator


def _check_kappa(kappa: float):
    if not np.all(np.isfinite(kappa)) or np.any(np.asarray(kappa) < 0):
        raise InvalidArgumentError(f"kappa must be finite and non-negative, got {kappa}")


def xaic_values(fit: FitResult, kappa, corrected: bool = False):
    """
    Vectorised XAIC / XAICc values for one fit and many kappa (e.g. a focus grid).

    Examples
    --------
    >>> fit = FitResult(mu_hat=[0.0], sigma2_hat=1.0, rss=1.0, log_lik=-10.0,
    ...                 gram_inv=[[1.0]], k=3, n=100, variance_mode="unknown")
    >>> float(xaic_values(fit, 3.0))
    26.0
    """
    _check_kappa(kappa)
    penalty = fit.k + np.asarray(kappa, dtype=float)
    value = -2 * fit.log_lik + penalty
    if corrected:
        value = value + penalty * (fit.k + 1) / _small_sample_denominator(fit)
    return value


def xaic(fit: FitResult, kappa: float, model_id: int = 1, criterion: str = "XAIC") -> CriterionScore:
    """
    Extra-sample AIC: -2 log-likelihood + k + kappa.

    Parameters
    ----------
    fit : FitResult
    kappa : float
        Penalty from any test-input regime (``kappa_explicit``, ``kappa_distribution`` ...).
    model_id : int
        Identifier stored on the score.
    criterion : str
        Name stored on the score.

    Examples
    --------
    >>> fit = FitResult(mu_hat=[0.0], sigma2_hat=1.0, rss=1.0, log_lik=-10.0,
    ...                 gram_inv=[[1.0]], k=3, n=100, variance_mode="unknown")
    >>> xaic(fit, 3.0).value
    26.0
    """
    _check_kappa(kappa)
    kappa = float(kappa)
    return CriterionScore(
        criterion=criterion,
        model_id=model_id,
        value=float(-2 * fit.log_lik + (fit.k + kappa)),
        penalty_k=float(fit.k),
        penalty_kappa=kappa,
        variance_mode=fit.variance_mode,
        likelihood_constant=_likelihood_constant(fit),
    )


def xaicc(fit: FitResult, kappa: float, model_id: int = 1, criterion: str = "XAICc") -> CriterionScore:
    """
    Small-sample corrected XAIC.

    -2 log-likelihood + k + kappa + (k + kappa)(k + 1)/(n - k - 1), with k counting
    sigma^2 when it is estimated (then kappa already includes its +1).

    Raises
    ------
    SmallSampleError
        When n <= k + 1.

    Examples
    --------
    >>> fit = FitResult(mu_hat=[0.0], sigma2_hat=1.0, rss=1.0, log_lik=-10.0,
    ...                 gram_inv=[[1.0]], k=4, n=21, variance_mode="unknown")
    >>> xaicc(fit, 6.0).value
    33.125
    """
    _check_kappa(kappa)
    kappa = float(kappa)
    penalty = fit.k + kappa
    term = penalty * (fit.k + 1) / _small_sample_denominator(fit)
    return CriterionScore(
        criterion=criterion,
        model_id=model_id,
        value=float(-2 * fit.log_lik + penalty + term),
        penalty_k=float(fit.k),
        penalty_kappa=kappa,
        small_sample_term=float(term),
        variance_mode=fit.variance_mode,
        likelihood_constant=_likelihood_constant(fit),
    )


def faic(fit: FitResult, kappa_x: float, model_id: int = 1) -> CriterionScore:
    """Focused AIC: XAIC with the penalty of a single focus point."""
    return xaic(fit, kappa_x, model_id=model_id, criterion="FAIC")


def faicc(fit: FitResult, kappa_x: float, model_id: int = 1) -> CriterionScore:
    """Focused AICc: XAICc with the penalty of a single focus point."""
    return xaicc(fit, kappa_x, model_id=model_id, criterion="FAICc")


def aic(fit: FitResult, model_id: int = 1) -> CriterionScore:
    """
    -2 log-likelihood + 2k.

    For known sigma^2 this differs from RSS/sigma^2 + 2k only by
    n log(2 pi sigma^2), stored as ``likelihood_constant``.
    """
    penalty = 2 * fit.k
    return CriterionScore(
        criterion="AIC",
        model_id=model_id,
        value=float(-2 * fit.log_lik + penalty),
        penalty_k=float(penalty),
        variance_mode=fit.variance_mode,
        likelihood_constant=_likelihood_constant(fit),
    )


def aicc(fit: FitResult, model_id: int = 1) -> CriterionScore:
    """AIC + 2k(k + 1)/(n - k - 1)."""
    penalty = 2 * fit.k
    term = penalty * (fit.k + 1) / _small_sample_denominator(fit)
    return CriterionScore(
        criterion="AICc",
        model_id=model_id,
        value=float(-2 * fit.log_lik + penalty + term),
        penalty_k=float(penalty),
        small_sample_term=float(term),
        variance_mode=fit.variance_mode,
        likelihood_constant=_likelihood_constant(fit),
    )


def bic(fit: FitResult, model_id: int = 1) -> CriterionScore:
    """-2 log-likelihood + k log n."""
    penalty = fit.k * math.log(fit.n)
    return CriterionScore(
        criterion="BIC",
        model_id=model_id,
        value=float(-2 * fit.log_lik + penalty),
        penalty_k=float(penalty),
        variance_mode=fit.variance_mode,
        likelihood_constant=_likelihood_constant(fit),
    )


def gcv(fit: FitResult, model_id: int = 1) -> CriterionScore:
    """
    Generalised cross-validation (RSS/n) / (1 - k_mu/n)^2.

    Uses k_mu, the trace of the hat matrix, not k.

    Examples
    --------
    >>> fit = FitResult(mu_hat=np.zeros(5), sigma2_hat=1.0, rss=10.0, log_lik=0.0,
    ...                 gram_inv=np.eye(5), k=6, n=10, variance_mode="unknown")
    >>> gcv(fit).value
    4.0
    """
    if fit.n <= fit.k_mu:
        raise InsufficientDataError(f"GCV needs n > k_mu, got n={fit.n}, k_mu={fit.k_mu}")
    value = (fit.rss / fit.n) / (1 - fit.k_mu / fit.n) ** 2
    return CriterionScore(
        criterion="GCV",
        model_id=model_id,
        value=float(value),
        penalty_k=float(fit.k_mu),
        variance_mode=fit.variance_mode,
    )


CRITERION_FUNCS = {
    "AIC": aic,
    "AICc": aicc,
    "BIC": bic,
    "GCV": gcv,
    "XAIC": xaic,
    "XAICc": xaicc,
    "FAIC": faic,
    "FAICc": faicc,
}
KAPPA_CRITERIA = frozenset({"XAIC", "XAICc", "FAIC", "FAICc"})


def score_criterion(name: str, fit: FitResult, kappa: float | None = None, model_id: int = 1) -> CriterionScore:
    """Score ``fit`` under the criterion called ``name``."""
    try:
        func = CRITERION_FUNCS[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown criterion {name!r}; choose from {sorted(CRITERION_FUNCS)}"
        ) from None
    if name in KAPPA_CRITERIA:
        if kappa is None:
            raise InvalidArgumentError(f"{name} needs a kappa from a test-input regime")
        return func(fit, kappa, model_id=model_id)
    return func(fit, model_id=model_id)


# --------------------------------------------------------------------------
# weights and selection
# --------------------------------------------------------------------------


def _check_comparable(scores) -> list:
    scores = list(scores)
    if not scores:
        raise InvalidArgumentError("at least one score is required")
    if len({s.criterion for s in scores}) > 1:
        raise IncomparableScoresError(
            f"scores mix criteria {sorted({s.criterion for s in scores})}"
        )
    if len({s.variance_mode for s in scores}) > 1:
        raise IncomparableScoresError("scores mix known-variance and unknown-variance models")
    return scores


def akaike_weights_array(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """exp(-(v - min v)/2) normalised along ``axis``."""
    values = np.asarray(values, dtype=float)
    rel = values - values.min(axis=axis, keepdims=True)
    w = np.exp(-rel / 2)
    return w / w.sum(axis=axis, keepdims=True)


def akaike_weights(scores) -> np.ndarray:
    """
    Akaike weights of models scored by one criterion.

    Examples
    --------
    >>> s = [CriterionScore(criterion="AIC", model_id=i, value=v, penalty_k=0.0)
    ...      for i, v in enumerate([10.0, 10.0], start=1)]
    >>> akaike_weights(s)
    array([0.5, 0.5])
    """
    scores = _check_comparable(scores)
    return akaike_weights_array(np.array([s.value for s in scores]))


def select(scores) -> int:
    """
    Model id with the smallest score; ties go to the smallest model id.

    Examples
    --------
    >>> s = [CriterionScore(criterion="AIC", model_id=i, value=v, penalty_k=0.0)
    ...      for i, v in enumerate([26.0, 25.0, 27.0], start=1)]
    >>> select(s)
    2
    """
    scores = _check_comparable(scores)
    return min(scores, key=lambda s: (s.value, s.model_id)).model_id


def akaike_weighted_predict(predictions: np.ndarray, weights: np.ndarray) -> np.ndarray | float:
    """
    Weighted prediction sum_i w_i * prediction_i over models (axis 0).

    ``predictions`` may be (m,) for a single point or (m, points). ``weights``
    is (m,), or (m, points) when each test point has its own weights (FAICc-w).
    """
    predictions = np.asarray(predictions, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if weights.ndim == 2 and weights.shape == predictions.shape:
        return np.sum(weights * predictions, axis=0)
    if weights.ndim != 1 or predictions.shape[0] != weights.shape[0]:
        raise DimensionMismatchError(
            f"weights of shape {weights.shape} for predictions of shape {predictions.shape}"
        )
    weights = weights.reshape((-1,) + (1,) * (predictions.ndim - 1))
    result = np.sum(weights * predictions, axis=0)
    return float(result) if np.ndim(result) == 0 else result
