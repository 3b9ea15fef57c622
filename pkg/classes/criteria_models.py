from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from classes.linear_models import VarianceMode
from classes.sim_models import InputDist


class TestInputSpec(BaseModel):
    """
    What is known about the test inputs when scoring a model.

    Attributes
    ----------
    variant : {"explicit", "distribution", "focus", "empirical_smoothed", "empirical"}
        explicit: raw test inputs ``points`` (n' x d).
        distribution: ``input_dist`` or a design-basis ``second_moment``.
        focus: one or more raw focus points in ``points``, scored one at a time.
        empirical_smoothed: moment-matched Gaussian of the training inputs.
        empirical: the empirical distribution of the training inputs (gives AIC).
    """

    __test__ = False

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    variant: Literal["explicit", "distribution", "focus", "empirical_smoothed", "empirical"]
    points: Optional[np.ndarray] = None
    input_dist: Optional[InputDist] = None
    second_moment: Optional[np.ndarray] = None
    smoother: Literal["moment_matched_gaussian"] = "moment_matched_gaussian"

    @field_validator("points", mode="before")
    @classmethod
    def _points(cls, value):
        if value is None:
            return None
        arr = np.array(value, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, np.newaxis]
        return arr

    @field_validator("second_moment", mode="before")
    @classmethod
    def _moment(cls, value):
        if value is None:
            return None
        return np.atleast_2d(np.array(value, dtype=float))

    @model_validator(mode="after")
    def _check_variant(self):
        if self.variant in ("explicit", "focus"):
            if self.points is None or self.points.shape[0] < 1:
                raise ValueError(f"the {self.variant} regime needs at least one test point")
        if self.variant == "distribution" and self.input_dist is None and self.second_moment is None:
            raise ValueError("the distribution regime needs an input distribution or a second moment")
        return self


class CriterionScore(BaseModel):
    """
    Score of one model under one criterion, with its penalty decomposition.

    For likelihood-based criteria ``value = -2 log_lik + penalty_k + penalty_kappa +
    small_sample_term`` (absent terms count as zero). ``likelihood_constant`` is
    n log(2 pi sigma^2) for known variance, the offset to the RSS/sigma^2 form.
    """

    model_config = ConfigDict(frozen=True)

    criterion: str
    model_id: int
    value: float
    penalty_k: float
    penalty_kappa: Optional[float] = None
    small_sample_term: Optional[float] = None
    variance_mode: Optional[VarianceMode] = None
    likelihood_constant: Optional[float] = None
