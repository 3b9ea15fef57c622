# -*- coding: utf-8 -*-
"""
Design matrices, least-squares fitting and prediction for single linear models.
"""

import logging
import sys
from pathlib import Path

import numpy as np
from numpy.polynomial import hermite_e, polynomial
from scipy import linalg

project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from classes.errors import (  # noqa: E402
    DegenerateFitError,
    DimensionMismatchError,
    InsufficientDataError,
    InvalidArgumentError,
    SingularDesignError,
)
from classes.linear_models import DesignMatrix, FitResult, ModelSpec  # noqa: E402
from functions.util_funcs import load_variables  # noqa: E402

logger = logging.getLogger(__name__)

_LINEAR = load_variables()["linear"]
SINGULAR_TOL = float(_LINEAR["SINGULAR_TOL"])
DEGENERATE_RSS = float(_LINEAR["DEGENERATE_RSS"])


def build_polynomial_design(
    xs: np.ndarray, degree: int, basis_kind: str = "monomial"
) -> DesignMatrix:
    """
    Evaluate a polynomial basis at scalar inputs.

    Parameters
    ----------
    xs : np.ndarray
        Scalar inputs, shape (n,) or (n, 1).
    degree : int
        Highest polynomial degree; the design has ``degree + 1`` columns.
    basis_kind : {"monomial", "hermite"}
        ``monomial`` gives column j = x**j. ``hermite`` gives the probabilists'
        Hermite polynomials He_j, orthogonal under N(0, 1).

    Returns
    -------
    DesignMatrix

    Examples
    --------
    >>> build_polynomial_design([2.0], 2, "monomial").values
    array([[1., 2., 4.]])
    >>> build_polynomial_design([2.0], 2, "hermite").values
    array([[1., 2., 3.]])
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 2:
        if xs.shape[1] != 1:
            raise InvalidArgumentError(
                f"polynomial models take one raw input column, got {xs.shape[1]}"
            )
        xs = xs[:, 0]
    xs = np.atleast_1d(xs)
    if int(degree) != degree or degree < 0:
        raise InvalidArgumentError(f"degree must be a non-negative integer, got {degree}")
    if not np.all(np.isfinite(xs)):
        raise InvalidArgumentError("inputs must be finite")

    if basis_kind == "monomial":
        values = polynomial.polyvander(xs, int(degree))
    elif basis_kind == "hermite":
        values = hermite_e.hermevander(xs, int(degree))
    else:
        raise InvalidArgumentError(f"unknown basis kind {basis_kind!r}")
    return DesignMatrix(values=values)


def build_subset_design(
    U: np.ndarray, subset, include_intercept: bool = True
) -> DesignMatrix:
    """
    Select raw input columns, optionally behind an all-ones intercept column.

    Parameters
    ----------
    U : np.ndarray
        Raw inputs (n x d).
    subset : iterable of int
        1-based column indices; they are used in ascending order.
    include_intercept : bool
        Prepend an intercept column.

    Returns
    -------
    DesignMatrix

    Examples
    --------
    >>> build_subset_design([[3.0, 4.0]], [2]).values
    array([[1., 4.]])
    >>> build_subset_design([[3.0, 4.0]], []).values
    array([[1.]])
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    subset = [int(c) for c in subset]
    if len(set(subset)) != len(subset):
        raise InvalidArgumentError(f"duplicate subset indices {subset}")
    d = U.shape[1]
    bad = [c for c in subset if c < 1 or c > d]
    if bad:
        raise InvalidArgumentError(f"subset indices {bad} outside 1..{d}")
    if not subset and not include_intercept:
        raise InvalidArgumentError("a design needs at least one column")

    idx = np.array(sorted(subset), dtype=int) - 1
    columns = [U[:, idx]]
    if include_intercept:
        columns.insert(0, np.ones((U.shape[0], 1)))
    return DesignMatrix(values=np.hstack(columns))


def build_design(spec: ModelSpec, raw_inputs: np.ndarray) -> DesignMatrix:
    """Build the design matrix of ``raw_inputs`` under the basis of ``spec``."""
    if spec.basis == "polynomial":
        return build_polynomial_design(raw_inputs, spec.degree, spec.basis_kind)
    return build_subset_design(raw_inputs, spec.columns, spec.include_intercept)


def qr_factor(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Economic QR of a design after the shape and rank checks."""
    n, k_mu = values.shape
    if n < k_mu:
        raise InsufficientDataError(f"{n} observations cannot fit {k_mu} mean parameters")
    singular_values = linalg.svdvals(values)
    if singular_values.min() <= SINGULAR_TOL * singular_values.max():
        raise SingularDesignError(
            f"design is rank deficient (singular value ratio "
            f"{singular_values.min() / max(singular_values.max(), 1e-300):.3e})"
        )
    Q, R = linalg.qr(values, mode="economic")
    return Q, R


def _inverse_from_r(R: np.ndarray) -> np.ndarray:
    r_inv = linalg.solve_triangular(R, np.eye(R.shape[0]))
    return r_inv @ r_inv.T


def gram_inverse(design: DesignMatrix) -> np.ndarray:
    """
    Inverse of X^T X from the R factor of a QR decomposition of X.

    Raises
    ------
    SingularDesignError
        If the smallest singular value of X is below 1e-10 times the largest.
    InsufficientDataError
        If X has fewer rows than columns.
    """
    _, R = qr_factor(design.values)
    return _inverse_from_r(R)


def fit_ols(design: DesignMatrix, y: np.ndarray, spec: ModelSpec) -> FitResult:
    """
    Maximum-likelihood fit of a Gaussian linear model.

    The coefficients come from a QR decomposition of the design rather than
    the normal equations, since high-degree monomial designs are badly
    conditioned.

    Parameters
    ----------
    design : DesignMatrix
        Design of the training inputs (n x k_mu).
    y : np.ndarray
        Responses (n).
    spec : ModelSpec
        Model description; decides whether sigma^2 is known or estimated.

    Returns
    -------
    FitResult

    Raises
    ------
    InsufficientDataError
        When n < k_mu.
    SingularDesignError
        When the design is rank deficient.
    DegenerateFitError
        When the variance is estimated and the residual sum of squares is zero.

    Examples
    --------
    >>> spec = ModelSpec.subset([], sigma2=1.0)
    >>> fit = fit_ols(DesignMatrix(values=[[1.0], [1.0]]), np.array([1.0, 3.0]), spec)
    >>> fit.mu_hat, fit.rss, fit.k
    (array([2.]), 2.0, 1)
    """
    X = design.values
    y = np.asarray(y, dtype=float).ravel()
    n, k_mu = X.shape
    if y.shape[0] != n:
        raise DimensionMismatchError(f"design has {n} rows but y has {y.shape[0]} entries")
    if not np.all(np.isfinite(y)):
        raise InvalidArgumentError("responses must be finite")
    if spec.k_mu != k_mu:
        raise DimensionMismatchError(
            f"model {spec.label} has {spec.k_mu} mean parameters but the design has {k_mu} columns"
        )

    Q, R = qr_factor(X)
    mu_hat = linalg.solve_triangular(R, Q.T @ y)
    residuals = y - X @ mu_hat
    rss = float(residuals @ residuals)

    if spec.variance_mode == "unknown":
        if rss < DEGENERATE_RSS:
            raise DegenerateFitError(
                f"model {spec.label} fits the data exactly (rss={rss:.3e}); variance estimate is zero"
            )
        sigma2_hat = rss / n
        log_lik = -(n / 2) * (np.log(2 * np.pi * rss / n) + 1)
    else:
        sigma2_hat = spec.known_sigma2
        log_lik = -(n / 2) * np.log(2 * np.pi * sigma2_hat) - rss / (2 * sigma2_hat)

    logger.debug("fitted %s: n=%d rss=%.6g log_lik=%.6g", spec.label, n, rss, log_lik)
    return FitResult(
        mu_hat=mu_hat,
        sigma2_hat=float(sigma2_hat),
        rss=rss,
        log_lik=float(log_lik),
        gram_inv=_inverse_from_r(R),
        k=spec.k,
        n=n,
        variance_mode=spec.variance_mode,
        spec=spec,
    )


def predict(fit: FitResult, x: np.ndarray) -> float:
    """
    Predicted mean x^T mu_hat at a design vector.

    Examples
    --------
    >>> fit = FitResult(mu_hat=[2.0, 1.0], sigma2_hat=1.0, rss=0.0, log_lik=0.0,
    ...                 gram_inv=np.eye(2), k=2, n=2, variance_mode="known")
    >>> predict(fit, [1.0, 3.0])
    5.0
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != fit.k_mu:
        raise DimensionMismatchError(
            f"design vector has length {x.shape[0]}, model has {fit.k_mu} coefficients"
        )
    return float(x @ fit.mu_hat)


def predict_design(fit: FitResult, design: DesignMatrix) -> np.ndarray:
    """Predicted means for every row of a design matrix."""
    if design.k_mu != fit.k_mu:
        raise DimensionMismatchError(
            f"design has {design.k_mu} columns, model has {fit.k_mu} coefficients"
        )
    return design.values @ fit.mu_hat
