"""
Exception hierarchy shared by the library, the simulation harness and the CLI.

Numerical precondition failures also derive from ``ValueError`` so callers that
only know numpy conventions can still catch them.
"""


class XselError(Exception):
    """Base class for every error raised on purpose by this project."""


class InvalidArgumentError(XselError, ValueError):
    """An argument violates a documented precondition."""


class DimensionMismatchError(InvalidArgumentError):
    """Vector or matrix shapes do not agree."""


class InsufficientDataError(InvalidArgumentError):
    """Fewer observations than mean parameters."""


class SingularDesignError(XselError, ValueError):
    """The design matrix is numerically rank deficient."""


class DegenerateFitError(XselError, ValueError):
    """The residual sum of squares vanished, so the variance estimate is zero."""


class SmallSampleError(XselError, ValueError):
    """A small-sample correction is undefined because n <= k + 1."""


class NotPositiveSemidefiniteError(InvalidArgumentError):
    """A second-moment matrix is not symmetric positive semidefinite."""


class IncomparableScoresError(InvalidArgumentError):
    """Scores from different criteria or variance modes were mixed."""


class QuadratureError(XselError, RuntimeError):
    """Adaptive quadrature did not reach its tolerance within the refinement cap."""


class SimulationError(XselError, RuntimeError):
    """A simulation could not complete, e.g. too many redrawn replicates."""


class ConfigError(XselError):
    """Unknown names or inconsistent settings in an experiment or CLI configuration."""


class DatasetFormatError(XselError):
    """A CSV dataset is malformed (ragged rows, non-numeric cells, missing header)."""
