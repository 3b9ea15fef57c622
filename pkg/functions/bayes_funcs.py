# -*- coding: utf-8 -*-
"""
Bayesian model averaging over Gaussian linear models.

Two within-model priors are supported: the improper Jeffreys prior on
(mu, sigma^2), which has a closed-form marginal likelihood, and independent
Gaussian slabs on the coefficients with the Jeffreys prior on sigma^2, where
the sigma^2 integral is done by adaptive quadrature on log sigma^2.
"""

import logging
import math
import sys
import warnings
from pathlib import Path

import numpy as np
from scipy import integrate, special

project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from classes.bayes_models import PosteriorSummary, PriorSpec  # noqa: E402
from classes.errors import (  # noqa: E402
    DegenerateFitError,
    DimensionMismatchError,
    InsufficientDataError,
    InvalidArgumentError,
    QuadratureError,
)
from classes.linear_models import DesignMatrix, FitResult  # noqa: E402
from functions.linear_funcs import DEGENERATE_RSS, build_design, qr_factor  # noqa: E402
from functions.util_funcs import load_variables  # noqa: E402

logger = logging.getLogger(__name__)

_BAYES = load_variables()["bayes"]
QUAD_WINDOW = float(_BAYES["QUAD_WINDOW"])
QUAD_EPSREL = float(_BAYES["QUAD_EPSREL"])
QUAD_REFINEMENTS = int(_BAYES["QUAD_REFINEMENTS"])
_INITIAL_LIMIT = 50
_PEAK_GRID = 801


def _checked_inputs(design: DesignMatrix, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = design.values
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != design.n:
        raise DimensionMismatchError(f"design has {design.n} rows but y has {y.shape[0]} entries")
    if design.n <= design.k_mu:
        raise InsufficientDataError(
            f"marginal likelihood needs n > k_mu, got n={design.n}, k_mu={design.k_mu}"
        )
    return X, y


def _ols_rss(X: np.ndarray, y: np.ndarray) -> tuple[float, np.ndarray]:
    Q, R = qr_factor(X)
    residuals = y - Q @ (Q.T @ y)
    return float(residuals @ residuals), R


def log_marginal_jeffreys(design: DesignMatrix, y: np.ndarray) -> float:
    """
    Log marginal likelihood under the prior density 1/sigma^2 on (mu, sigma^2).

    log[Gamma(a) pi^-a |X^T X|^-1/2 rss^-a] with a = (n - k_mu)/2.

    Parameters
    ----------
    design : DesignMatrix
    y : np.ndarray

    Returns
    -------
    float

    Raises
    ------
    InsufficientDataError
        When n <= k_mu.
    SingularDesignError
        When X^T X is singular.
    DegenerateFitError
        When the residual sum of squares is zero.

    Examples
    --------
    >>> value = log_marginal_jeffreys(DesignMatrix(values=[[1.0], [1.0]]), [-1.0, 1.0])
    >>> math.isclose(value, math.log(0.5))
    True
    """
    X, y = _checked_inputs(design, y)
    rss, R = _ols_rss(X, y)
    if rss < DEGENERATE_RSS:
        raise DegenerateFitError(f"rss={rss:.3e}; the Jeffreys marginal is unbounded")
    a = (design.n - design.k_mu) / 2
    logdet = 2 * np.sum(np.log(np.abs(np.diag(R))))
    return float(special.gammaln(a) - a * math.log(math.pi) - 0.5 * logdet - a * math.log(rss))


class _SlabIntegrand:
    """
    log p(Y | sigma^2) with the coefficients integrated out, as a function of t = log sigma^2.

    With S = X^T X, c = X^T Y and Lambda the diagonal prior precision
    (zero on flat columns), p(Y | sigma^2) is Gaussian-integral closed form.
    """

    def __init__(self, X: np.ndarray, y: np.ndarray, prior: PriorSpec):
        n, k = X.shape
        bad = [j for j in prior.flat_columns if j >= k]
        if bad:
            raise InvalidArgumentError(f"flat columns {bad} outside the {k} design columns")
        flat = list(prior.flat_columns)
        precision = np.full(k, 1.0 / prior.slab_variance)
        precision[flat] = 0.0
        self.n, self.k = n, k
        self.S = X.T @ X
        self.c = X.T @ y
        self.yy = float(y @ y)
        self.precision = precision
        n_slab = int(np.count_nonzero(precision))
        self.constant = (
            -0.5 * (n - k) * math.log(2 * math.pi)
            - 0.5 * n_slab * math.log(2 * math.pi * prior.slab_variance)
        )

    def _systems(self, s: np.ndarray) -> np.ndarray:
        return self.S[np.newaxis] + s[:, np.newaxis, np.newaxis] * np.diag(self.precision)[np.newaxis]

    def log_density(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        s = np.exp(t)
        A = self._systems(s)
        _, logdet = np.linalg.slogdet(A)
        sol = np.linalg.solve(A, np.broadcast_to(self.c, (s.shape[0], self.k))[..., np.newaxis])[..., 0]
        quad_form = self.yy - sol @ self.c
        return self.constant - 0.5 * (self.n - self.k) * t - quad_form / (2 * s) - 0.5 * logdet

    def conditional_mean(self, t) -> np.ndarray:
        s = np.atleast_1d(np.exp(np.asarray(t, dtype=float)))
        A = self._systems(s)
        return np.linalg.solve(A, np.broadcast_to(self.c, (s.shape[0], self.k))[..., np.newaxis])[..., 0]


def _window(anchor: float) -> tuple[float, float]:
    return math.log(anchor / QUAD_WINDOW), math.log(anchor * QUAD_WINDOW)


def _peak(integrand: _SlabIntegrand, lo: float, hi: float) -> tuple[float, float]:
    ts = np.linspace(lo, hi, _PEAK_GRID)
    values = integrand.log_density(ts)
    i = int(np.argmax(values))
    return float(ts[i]), float(values[i])


def _quad_refined(func, lo: float, hi: float, peak: float, vector: bool = False):
    limit = _INITIAL_LIMIT
    points = [peak] if lo < peak < hi else None
    for attempt in range(QUAD_REFINEMENTS + 1):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                if vector:
                    value, _ = integrate.quad_vec(
                        func, lo, hi, epsrel=QUAD_EPSREL, epsabs=0.0, limit=limit, points=points
                    )
                else:
                    value, _ = integrate.quad(
                        func, lo, hi, epsrel=QUAD_EPSREL, epsabs=0.0, limit=limit, points=points
                    )
                return value
            except integrate.IntegrationWarning as exc:
                logger.debug("quadrature attempt %d (limit=%d) failed: %s", attempt, limit, exc)
                limit *= 2
    raise QuadratureError(
        f"sigma^2 quadrature did not reach relative tolerance {QUAD_EPSREL} "
        f"after {QUAD_REFINEMENTS} refinements"
    )


def _slab_setup(design, y, prior, sigma2_anchor):
    if prior.kind != "gaussian_slab":
        raise InvalidArgumentError(f"expected a gaussian_slab prior, got {prior.kind!r}")
    X, y = _checked_inputs(design, y)
    rss, _ = _ols_rss(X, y)
    anchor = sigma2_anchor if sigma2_anchor is not None else rss / design.n
    if not anchor > 0:
        raise DegenerateFitError("the sigma^2 anchor of the quadrature window must be positive")
    integrand = _SlabIntegrand(X, y, prior)
    lo, hi = _window(anchor)
    peak, log_peak = _peak(integrand, lo, hi)
    return integrand, lo, hi, peak, log_peak


def log_marginal_gaussian_slab(
    design: DesignMatrix,
    y: np.ndarray,
    prior: PriorSpec,
    sigma2_anchor: float | None = None,
) -> float:
    """
    Log marginal likelihood with Gaussian slabs on the coefficients.

    Coefficients listed in ``prior.flat_columns`` get an improper flat prior,
    the others N(0, slab_variance); sigma^2 has the 1/sigma^2 prior. The sigma^2
    integral runs over log sigma^2 in [anchor/1e4, anchor*1e4].

    Parameters
    ----------
    design : DesignMatrix
        Design in the basis the slabs refer to (Hermite for polynomial models).
    y : np.ndarray
    prior : PriorSpec
    sigma2_anchor : float, optional
        Centre of the quadrature window; the model's own rss/n by default.

    Raises
    ------
    QuadratureError
        When the tolerance is not met after the refinement cap.
    """
    integrand, lo, hi, peak, log_peak = _slab_setup(design, y, prior, sigma2_anchor)
    value = _quad_refined(
        lambda t: float(np.exp(integrand.log_density(t)[0] - log_peak)), lo, hi, peak
    )
    return float(log_peak + math.log(value))


def posterior_mean_gaussian_slab(
    design: DesignMatrix,
    y: np.ndarray,
    prior: PriorSpec,
    sigma2_anchor: float | None = None,
) -> np.ndarray:
    """
    Posterior mean coefficients under the Gaussian-slab prior.

    E[mu | Y] is the posterior-sigma^2 average of (X^T X + sigma^2 Lambda)^-1 X^T Y.
    """
    integrand, lo, hi, peak, log_peak = _slab_setup(design, y, prior, sigma2_anchor)

    def weighted(t):
        w = np.exp(integrand.log_density(t)[0] - log_peak)
        return np.concatenate(([w], w * integrand.conditional_mean(t)[0]))

    totals = _quad_refined(weighted, lo, hi, peak, vector=True)
    return totals[1:] / totals[0]


def model_posterior(log_marginals) -> PosteriorSummary:
    """
    Posterior model probabilities under a uniform model prior.

    Examples
    --------
    >>> model_posterior([0.0, math.log(9.0)]).weights
    array([0.1, 0.9])
    """
    log_marginals = np.asarray(log_marginals, dtype=float).ravel()
    if log_marginals.size == 0:
        raise InvalidArgumentError("at least one model is required")
    if not np.all(np.isfinite(log_marginals)):
        raise InvalidArgumentError("log marginal likelihoods must be finite")
    weights = np.exp(log_marginals - log_marginals.max())
    weights = weights / weights.sum()
    return PosteriorSummary(
        log_marginals=log_marginals,
        weights=weights,
        map_model=int(np.argmax(weights)) + 1,
    )


def bma_predict(fits, weights, x, coefficients=None) -> float | np.ndarray:
    """
    Posterior-weighted mean prediction sum_i w_i m_i(x).

    Parameters
    ----------
    fits : list of FitResult
        Fitted models; each must carry its ``spec`` so the raw input can be
        expanded into that model's design vector.
    weights : array-like
        Posterior model probabilities, one per fit.
    x : array-like
        Raw input(s). A scalar or 1-D array of scalars for polynomial models,
        a row or matrix of raw columns for subset models.
    coefficients : list of np.ndarray, optional
        Posterior mean coefficients replacing each fit's ``mu_hat``
        (e.g. from ``posterior_mean_gaussian_slab``). Under the Jeffreys
        prior the posterior mean is ``mu_hat`` itself.

    Returns
    -------
    float or np.ndarray
        A float for a single raw input, otherwise one value per input.
    """
    fits = list(fits)
    weights = np.asarray(weights, dtype=float).ravel()
    if len(fits) != weights.shape[0]:
        raise DimensionMismatchError(f"{weights.shape[0]} weights for {len(fits)} models")
    if coefficients is not None and len(coefficients) != len(fits):
        raise DimensionMismatchError(f"{len(coefficients)} coefficient vectors for {len(fits)} models")

    total = None
    for i, fit in enumerate(fits):
        if fit.spec is None:
            raise InvalidArgumentError("bma_predict needs fits that carry their model spec")
        coef = fit.mu_hat if coefficients is None else np.asarray(coefficients[i], dtype=float)
        design = build_design(fit.spec, x)
        if coef.shape[0] != design.k_mu:
            raise DimensionMismatchError(
                f"model {fit.spec.label} has {design.k_mu} columns but {coef.shape[0]} coefficients"
            )
        term = weights[i] * (design.values @ coef)
        total = term if total is None else total + term
    return float(total[0]) if total.shape[0] == 1 else total


def posterior_predictive_variance(fit: FitResult, x: np.ndarray, sigma2: float) -> float:
    """
    sigma^2 (1 + x^T (X^T X)^-1 x) for a design vector ``x``.

    Equals sigma^2 (1 + kappa_x / n) with kappa_x the known-variance focused penalty.

    Examples
    --------
    >>> fit = FitResult(mu_hat=[0.0], sigma2_hat=1.0, rss=1.0, log_lik=0.0,
    ...                 gram_inv=[[0.5]], k=1, n=2, variance_mode="known")
    >>> posterior_predictive_variance(fit, [2.0], 0.5)
    1.5
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != fit.k_mu:
        raise DimensionMismatchError(
            f"design vector has length {x.shape[0]}, model has {fit.k_mu} coefficients"
        )
    if not sigma2 > 0:
        raise InvalidArgumentError(f"sigma2 must be positive, got {sigma2}")
    return float(sigma2 * (1 + x @ fit.gram_inv @ x))
