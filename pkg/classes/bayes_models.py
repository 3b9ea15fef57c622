from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class PriorSpec(BaseModel):
    """
    Within-model prior for Bayesian averaging.

    ``jeffreys`` is the improper prior proportional to 1/sigma^2 on (mu, sigma^2).
    ``gaussian_slab`` puts independent N(0, slab_variance) priors on every
    coefficient except the 0-based ``flat_columns`` (improper flat) and keeps
    the 1/sigma^2 prior on the variance. The model prior is uniform.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["jeffreys", "gaussian_slab"] = "jeffreys"
    slab_variance: float = Field(100.0, gt=0)
    flat_columns: tuple[int, ...] = (0,)
    model_prior: Literal["uniform"] = "uniform"

    @field_validator("flat_columns")
    @classmethod
    def _non_negative(cls, value):
        if any(c < 0 for c in value):
            raise ValueError("flat_columns are 0-based design column indices")
        return tuple(sorted(set(value)))


class PosteriorSummary(BaseModel):
    """Posterior model probabilities; ``map_model`` is the 1-based argmax (ties to the smallest id)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    log_marginals: np.ndarray
    weights: np.ndarray
    map_model: int = Field(ge=1)

    @model_validator(mode="after")
    def _simplex(self):
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("posterior weights must sum to one")
        return self
