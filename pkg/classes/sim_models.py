import math
from typing import Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


SQRT3 = math.sqrt(3.0)


class InputDist(BaseModel):
    """
    Distribution of raw inputs used for training or test draws.

    Attributes
    ----------
    kind : {"gaussian", "uniform_box", "spike_slab", "rademacher"}
    mean : np.ndarray, optional
        Mean vector (gaussian).
    cov : np.ndarray, optional
        Covariance matrix (gaussian).
    lo, hi : np.ndarray, optional
        Box bounds per coordinate (uniform_box).
    slab_covs : tuple[np.ndarray, np.ndarray], optional
        Covariances of the two equally weighted zero-mean components (spike_slab).
    dim : int
        Number of raw input coordinates.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: Literal["gaussian", "uniform_box", "spike_slab", "rademacher"]
    dim: int = Field(ge=1)
    mean: Optional[np.ndarray] = None
    cov: Optional[np.ndarray] = None
    lo: Optional[np.ndarray] = None
    hi: Optional[np.ndarray] = None
    slab_covs: Optional[tuple[np.ndarray, np.ndarray]] = None

    @field_validator("mean", "lo", "hi", mode="before")
    @classmethod
    def _vector(cls, value):
        if value is None:
            return None
        return np.atleast_1d(np.array(value, dtype=float))

    @field_validator("cov", mode="before")
    @classmethod
    def _matrix(cls, value):
        if value is None:
            return None
        return np.atleast_2d(np.array(value, dtype=float))

    @field_validator("slab_covs", mode="before")
    @classmethod
    def _matrices(cls, value):
        if value is None:
            return None
        return tuple(np.atleast_2d(np.array(v, dtype=float)) for v in value)

    @model_validator(mode="after")
    def _check_kind(self):
        d = self.dim
        if self.kind == "gaussian":
            if self.mean is None or self.cov is None:
                raise ValueError("a gaussian input distribution needs mean and cov")
            _check_cov(self.cov, d)
            if self.mean.shape != (d,):
                raise ValueError(f"mean must have length {d}")
        elif self.kind == "uniform_box":
            if self.lo is None or self.hi is None:
                raise ValueError("a uniform box needs lo and hi")
            if self.lo.shape != (d,) or self.hi.shape != (d,):
                raise ValueError(f"lo and hi must have length {d}")
            if not np.all(self.lo < self.hi):
                raise ValueError("uniform box requires lo < hi in every coordinate")
        elif self.kind == "spike_slab":
            if self.slab_covs is None or len(self.slab_covs) != 2:
                raise ValueError("a spike-and-slab distribution needs two covariances")
            for c in self.slab_covs:
                _check_cov(c, d)
        return self

    @classmethod
    def gaussian(cls, mean, cov):
        mean = np.atleast_1d(np.array(mean, dtype=float))
        return cls(kind="gaussian", dim=mean.shape[0], mean=mean, cov=cov)

    @classmethod
    def standard_gaussian(cls, dim: int = 1, variance: float = 1.0):
        return cls.gaussian(np.zeros(dim), variance * np.eye(dim))

    @classmethod
    def uniform_box(cls, dim: int = 1, lo: float = -SQRT3, hi: float = SQRT3):
        return cls(kind="uniform_box", dim=dim, lo=np.full(dim, lo), hi=np.full(dim, hi))

    @classmethod
    def spike_slab(cls, dim: int = 6, spike: float = 1 / 5, slab: float = 9 / 5):
        return cls(kind="spike_slab", dim=dim, slab_covs=(spike * np.eye(dim), slab * np.eye(dim)))

    @classmethod
    def rademacher(cls, dim: int = 1):
        return cls(kind="rademacher", dim=dim)

    @property
    def moments(self) -> tuple[np.ndarray, np.ndarray]:
        """Mean vector and covariance matrix of the distribution."""
        d = self.dim
        if self.kind == "gaussian":
            return self.mean, self.cov
        if self.kind == "uniform_box":
            return (self.lo + self.hi) / 2, np.diag((self.hi - self.lo) ** 2 / 12)
        if self.kind == "spike_slab":
            return np.zeros(d), 0.5 * (self.slab_covs[0] + self.slab_covs[1])
        return np.zeros(d), np.eye(d)


def _check_cov(cov: np.ndarray, d: int):
    if cov.shape != (d, d):
        raise ValueError(f"covariance must be {d}x{d}, got {cov.shape}")
    if not np.allclose(cov, cov.T, atol=1e-10):
        raise ValueError("covariance must be symmetric")
    if np.linalg.eigvalsh(cov).min() < -1e-10:
        raise ValueError("covariance must be positive semidefinite")


TRUTH_NAMES = ("f1", "f2", "fmulti")


class TrueModel(BaseModel):
    """Noise-free regression function plus additive Gaussian noise variance."""

    model_config = ConfigDict(frozen=True)

    name: Literal["f1", "f2", "fmulti"]
    noise_variance: float = Field(0.1, gt=0)

    def f(self, inputs: np.ndarray) -> np.ndarray:
        u = np.asarray(inputs, dtype=float)
        u = u[:, np.newaxis] if u.ndim == 1 else np.atleast_2d(u)
        if self.name == "f1":
            return u[:, 0] + 2
        if self.name == "f2":
            return np.abs(u[:, 0])
        coefs = np.array([1.0, 0.1, 0.03, 0.001, 0.003])
        return 2 + u[:, :5] @ coefs


class ExperimentConfig(BaseModel):
    """
    Resolved configuration of one univariate or multivariate experiment.

    The seed is written into every artifact produced from this config.
    """

    model_config = ConfigDict(frozen=True)

    experiment: Literal["univariate", "multivariate"]
    seed: int = Field(ge=0)
    repeats: int = Field(ge=1)
    criteria: tuple[str, ...]
    truth: Literal["f1", "f2", "fmulti"] = "f1"
    noise_variance: float = Field(0.1, gt=0)
    n: int = Field(100, ge=2)
    max_degree: int = Field(6, ge=0)
    grid_start: float = -4.0
    grid_stop: float = 4.0
    grid_step: float = Field(0.1, gt=0)
    focus_points: tuple[float, ...] = (0.0, 4.0)
    xaic2_test_variance: float = Field(4.0, gt=0)
    slab_variance: float = Field(100.0, gt=0)
    n_test: int = Field(400, ge=1)
    train_settings: tuple[str, ...] = ("gaussian-60", "uniform-60", "spike-slab-60", "gaussian-100")
    xaic_regime: Literal["distribution", "empirical"] = "distribution"
    weighting: bool = False
    max_redraw_fraction: float = Field(0.01, ge=0, le=1)

    @property
    def grid(self) -> np.ndarray:
        steps = int(round((self.grid_stop - self.grid_start) / self.grid_step))
        return np.round(self.grid_start + self.grid_step * np.arange(steps + 1), 10)


class RiskReport(BaseModel):
    """
    Outcome of an experiment.

    Attributes
    ----------
    risk : pd.DataFrame
        Univariate: columns criterion, x, risk, se (one row per criterion and grid x).
        Multivariate: columns criterion, setting, risk, se.
    selections : pd.DataFrame
        Columns criterion, setting, focus, mean_index, var_index, se.
    aggregate : pd.DataFrame, optional
        Univariate only: criterion, grid_mean_risk, weighted_risk.
    failures : int
        Replicates redrawn because a candidate fit failed.
    seed : int
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    risk: pd.DataFrame
    selections: pd.DataFrame
    aggregate: Optional[pd.DataFrame] = None
    failures: int = Field(0, ge=0)
    seed: int


class ExtraSampleEstimate(BaseModel):
    """Monte Carlo extra-sample error against the XAIC(c) right-hand side on the same replicates."""

    model_config = ConfigDict(frozen=True)

    estimate: float
    se: float = Field(ge=0)
    rhs_estimate: float
    rhs_se: float = Field(ge=0)
    train_term: float
    diff: float
    diff_se: float = Field(ge=0)
    reps: int
    rejected: int = Field(0, ge=0)

    def agrees(self, se_multiple: float = 3.0) -> bool:
        return abs(self.diff) <= se_multiple * self.diff_se
