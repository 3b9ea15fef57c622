from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


VarianceMode = Literal["known", "unknown"]


def _frozen_array(value, ndim: int) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if ndim == 2 and arr.ndim == 1:
        arr = arr[:, np.newaxis]
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("array contains non-finite entries")
    arr.setflags(write=False)
    return arr


class Dataset(BaseModel):
    """
    Training data: raw inputs ``X`` (n x d) and responses ``Y`` (n).

    A one-dimensional ``X`` is read as a single raw-input column.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    X: np.ndarray
    Y: np.ndarray

    @field_validator("X", mode="before")
    @classmethod
    def _matrix(cls, value):
        return _frozen_array(value, 2)

    @field_validator("Y", mode="before")
    @classmethod
    def _vector(cls, value):
        return _frozen_array(value, 1)

    @model_validator(mode="after")
    def _rows_agree(self):
        if self.X.shape[0] < 1:
            raise ValueError("a dataset needs at least one row")
        if self.X.shape[0] != self.Y.shape[0]:
            raise ValueError(
                f"X has {self.X.shape[0]} rows but Y has {self.Y.shape[0]} entries"
            )
        return self

    @property
    def n(self) -> int:
        return int(self.Y.shape[0])

    @property
    def d(self) -> int:
        return int(self.X.shape[1])


class ModelSpec(BaseModel):
    """
    One candidate linear model.

    Attributes
    ----------
    basis : {"polynomial", "subset"}
        Polynomial in a single raw input, or a subset of raw input columns.
    degree : int, optional
        Polynomial degree (polynomial basis only).
    basis_kind : {"monomial", "hermite"}
        Monomials x^j or probabilists' Hermite polynomials He_j(x).
    columns : tuple[int, ...]
        1-based raw column indices (subset basis only).
    include_intercept : bool
        Prepend an all-ones column (subset basis only).
    known_sigma2 : float, optional
        Known noise variance; ``None`` means the variance is estimated.
    """

    model_config = ConfigDict(frozen=True)

    basis: Literal["polynomial", "subset"]
    degree: Optional[int] = Field(None, ge=0)
    basis_kind: Literal["monomial", "hermite"] = "monomial"
    columns: tuple[int, ...] = ()
    include_intercept: bool = True
    known_sigma2: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _check_basis(self):
        if self.basis == "polynomial" and self.degree is None:
            raise ValueError("a polynomial model needs a degree")
        if self.basis == "subset":
            if len(set(self.columns)) != len(self.columns):
                raise ValueError(f"duplicate subset columns {self.columns}")
            if any(c < 1 for c in self.columns):
                raise ValueError("subset columns are 1-based")
            if not self.columns and not self.include_intercept:
                raise ValueError("a subset model needs at least one column")
        return self

    @classmethod
    def polynomial(cls, degree: int, basis_kind: str = "monomial", sigma2: float | None = None):
        return cls(basis="polynomial", degree=degree, basis_kind=basis_kind, known_sigma2=sigma2)

    @classmethod
    def subset(cls, columns, include_intercept: bool = True, sigma2: float | None = None):
        return cls(
            basis="subset",
            columns=tuple(sorted(int(c) for c in columns)),
            include_intercept=include_intercept,
            known_sigma2=sigma2,
        )

    @property
    def variance_mode(self) -> VarianceMode:
        return "unknown" if self.known_sigma2 is None else "known"

    @property
    def k_mu(self) -> int:
        if self.basis == "polynomial":
            return self.degree + 1
        return len(self.columns) + int(self.include_intercept)

    @property
    def k(self) -> int:
        return self.k_mu + int(self.variance_mode == "unknown")

    @property
    def label(self) -> str:
        if self.basis == "polynomial":
            return f"degree {self.degree} ({self.basis_kind})"
        terms = (["1"] if self.include_intercept else []) + [f"u{c}" for c in self.columns]
        return "+".join(terms)


class DesignMatrix(BaseModel):
    """Feature representation of n inputs under one model's basis (n x k_mu)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _matrix(cls, value):
        arr = _frozen_array(value, 2)
        if arr.shape[1] < 1:
            raise ValueError("a design matrix needs at least one column")
        return arr

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def k_mu(self) -> int:
        return int(self.values.shape[1])


class FitResult(BaseModel):
    """
    Maximum-likelihood fit of one linear model.

    ``k`` counts sigma^2 when the variance is estimated. ``gram_inv`` is the
    inverse of X^T X computed from the R factor of the QR decomposition.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mu_hat: np.ndarray
    sigma2_hat: float = Field(gt=0)
    rss: float = Field(ge=0)
    log_lik: float
    gram_inv: np.ndarray
    k: int = Field(ge=1)
    n: int = Field(ge=1)
    variance_mode: VarianceMode
    spec: Optional[ModelSpec] = None

    @field_validator("mu_hat", mode="before")
    @classmethod
    def _vector(cls, value):
        return _frozen_array(value, 1)

    @field_validator("gram_inv", mode="before")
    @classmethod
    def _matrix(cls, value):
        return _frozen_array(value, 2)

    @property
    def k_mu(self) -> int:
        return int(self.mu_hat.shape[0])
