# -*- coding: utf-8 -*-
"""
Created on Wed Oct 14 2026

@author: Benedikt Goodman
"""

import math

import pytest
import numpy as np
from scipy import integrate, special

import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from classes.bayes_models import PriorSpec  # noqa: E402
from classes.errors import (  # noqa: E402
    DimensionMismatchError,
    InvalidArgumentError,
    SingularDesignError,
)
from classes.linear_models import DesignMatrix, FitResult, ModelSpec  # noqa: E402
from functions.bayes_funcs import (  # noqa: E402
    bma_predict,
    log_marginal_gaussian_slab,
    log_marginal_jeffreys,
    model_posterior,
    posterior_mean_gaussian_slab,
    posterior_predictive_variance,
)
from functions.criteria_funcs import kappa_focus  # noqa: E402
from functions.linear_funcs import build_design, fit_ols  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(3)


@pytest.fixture
def line_data(rng):
    xs = rng.standard_normal(100)
    y = xs + 2 + math.sqrt(0.1) * rng.standard_normal(100)
    return xs, y


def test_log_marginal_jeffreys_two_points():
    value = log_marginal_jeffreys(DesignMatrix(values=[[1.0], [1.0]]), [-1.0, 1.0])
    assert value == pytest.approx(math.log(0.5))


def test_log_marginal_jeffreys_duplicate_column():
    values = np.array([[1.0, 0.5, 0.5], [1.0, 1.5, 1.5], [1.0, -2.0, -2.0], [1.0, 0.3, 0.3]])
    with pytest.raises(SingularDesignError):
        log_marginal_jeffreys(DesignMatrix(values=values), [1.0, 2.0, 0.5, 0.1])


def test_log_marginal_jeffreys_matches_double_integral():
    y = np.array([0.3, -0.4, 1.2, 0.8, 0.1])
    n = y.size

    def integrand(mu, log_s2):
        s2 = math.exp(log_s2)
        rss = float(np.sum((y - mu) ** 2))
        # prior 1/sigma^2 with d sigma^2 = sigma^2 d log sigma^2
        return (2 * math.pi * s2) ** (-n / 2) * math.exp(-rss / (2 * s2))

    value, _ = integrate.dblquad(integrand, -12, 8, -6, 6)
    closed = log_marginal_jeffreys(DesignMatrix(values=np.ones((n, 1))), y)
    assert closed == pytest.approx(math.log(value), rel=1e-3)


def test_slab_limit_tracks_jeffreys(rng):
    X = np.column_stack([np.ones(12), rng.standard_normal(12)])
    design = DesignMatrix(values=X)
    y1 = X @ [1.0, 0.5] + 0.3 * rng.standard_normal(12)
    y2 = X @ [-0.2, 2.0] + 0.3 * rng.standard_normal(12)
    prior = PriorSpec(kind="gaussian_slab", slab_variance=1e8, flat_columns=(0,))

    offset1 = log_marginal_gaussian_slab(design, y1, prior) - log_marginal_jeffreys(design, y1)
    offset2 = log_marginal_gaussian_slab(design, y2, prior) - log_marginal_jeffreys(design, y2)
    assert offset1 == pytest.approx(offset2, abs=1e-4)


def test_slab_quadrature_matches_dense_grid(rng):
    xs = rng.standard_normal(30)
    y = 1 + xs - 0.5 * xs**2 + 0.4 * rng.standard_normal(30)
    spec = ModelSpec.polynomial(2, "hermite")
    design = build_design(spec, xs)
    prior = PriorSpec(kind="gaussian_slab", slab_variance=4.0, flat_columns=(0,))
    value = log_marginal_gaussian_slab(design, y, prior)

    X = design.values
    S, c, yy = X.T @ X, X.T @ y, float(y @ y)
    precision = np.array([0.0, 0.25, 0.25])
    ts = np.linspace(math.log(1e-4), math.log(1e2), 200_000)
    logs = []
    for t in ts[::100]:
        s = math.exp(t)
        A = S + s * np.diag(precision)
        _, logdet = np.linalg.slogdet(A)
        q = yy - c @ np.linalg.solve(A, c)
        logs.append(
            -0.5 * 27 * math.log(2 * math.pi) - math.log(2 * math.pi * 4.0)
            - 13.5 * t - q / (2 * s) - 0.5 * logdet
        )
    logs = np.array(logs)
    reference = special.logsumexp(logs) + math.log(ts[100] - ts[0])
    assert value == pytest.approx(reference, rel=1e-6)


def test_slab_posterior_favours_the_line(line_data):
    xs, y = line_data
    prior = PriorSpec(kind="gaussian_slab", slab_variance=100.0, flat_columns=(0,))
    specs = [ModelSpec.polynomial(d, "hermite") for d in (0, 1)]
    designs = [build_design(s, xs) for s in specs]
    posterior = model_posterior([log_marginal_gaussian_slab(d, y, prior) for d in designs])
    assert posterior.weights[1] > 0.99
    assert posterior.map_model == 2


def test_slab_prior_checks(line_data):
    xs, y = line_data
    design = build_design(ModelSpec.polynomial(1), xs)
    with pytest.raises(InvalidArgumentError):
        log_marginal_gaussian_slab(design, y, PriorSpec(kind="jeffreys"))
    with pytest.raises(InvalidArgumentError):
        log_marginal_gaussian_slab(
            design, y, PriorSpec(kind="gaussian_slab", flat_columns=(5,))
        )


def test_slab_posterior_mean_shrinks_towards_ols(line_data):
    xs, y = line_data
    spec = ModelSpec.polynomial(1, "hermite")
    design = build_design(spec, xs)
    fit = fit_ols(design, y, spec)
    wide = posterior_mean_gaussian_slab(
        design, y, PriorSpec(kind="gaussian_slab", slab_variance=1e6)
    )
    narrow = posterior_mean_gaussian_slab(
        design, y, PriorSpec(kind="gaussian_slab", slab_variance=1e-3)
    )
    np.testing.assert_allclose(wide, fit.mu_hat, atol=1e-4)
    assert abs(narrow[1]) < abs(fit.mu_hat[1])


def test_model_posterior():
    np.testing.assert_allclose(model_posterior([1.0, 1.0, 1.0, 1.0]).weights, [0.25] * 4)
    posterior = model_posterior([0.0, math.log(9.0)])
    np.testing.assert_allclose(posterior.weights, [0.1, 0.9])
    assert posterior.map_model == 2
    shifted = model_posterior([-500.0, -500.0 + math.log(9.0)])
    np.testing.assert_allclose(shifted.weights, posterior.weights, atol=1e-12)
    assert model_posterior([2.0, 2.0]).map_model == 1
    with pytest.raises(InvalidArgumentError):
        model_posterior([])


def test_bma_predict(line_data):
    xs, y = line_data
    specs = [ModelSpec.polynomial(d) for d in (0, 1)]
    fits = [fit_ols(build_design(s, xs), y, s) for s in specs]

    single = bma_predict(fits[1:], [1.0], 0.5)
    assert single == pytest.approx(fits[1].mu_hat @ [1.0, 0.5], abs=1e-10)

    both = bma_predict(fits, [0.5, 0.5], 0.0, coefficients=[np.array([2.0]), np.array([4.0, 1.0])])
    assert both == pytest.approx(3.0)

    grid = bma_predict(fits, [0.3, 0.7], np.array([-1.0, 0.0, 1.0]))
    assert grid.shape == (3,)
    with pytest.raises(DimensionMismatchError):
        bma_predict(fits, [1.0], 0.0)


def test_posterior_predictive_variance(rng):
    X = rng.standard_normal((20, 3))
    spec = ModelSpec.subset([1, 2, 3], include_intercept=False, sigma2=0.5)
    design = DesignMatrix(values=X)
    fit = fit_ols(design, rng.standard_normal(20), spec)

    assert posterior_predictive_variance(fit, np.zeros(3), 0.5) == pytest.approx(0.5)
    x = rng.standard_normal(3)
    kappa = kappa_focus(design, x, "known")
    expected = 0.5 * (1 + kappa / 20)
    assert posterior_predictive_variance(fit, x, 0.5) == pytest.approx(expected, abs=1e-12)


def test_posterior_predictive_variance_orthonormal():
    fit = FitResult(
        mu_hat=[0.0, 0.0], sigma2_hat=1.0, rss=1.0, log_lik=0.0,
        gram_inv=np.eye(2) / 4, k=2, n=4, variance_mode="known",
    )
    assert posterior_predictive_variance(fit, [2.0, 0.0], 0.3) == pytest.approx(0.6)
    with pytest.raises(InvalidArgumentError):
        posterior_predictive_variance(fit, [2.0, 0.0], 0.0)
