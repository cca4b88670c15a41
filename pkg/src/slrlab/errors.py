"""Exception types shared across the library."""


class SlrLabError(ValueError):
    """Base class for all slrlab errors."""


class NonPositiveVariance(SlrLabError):
    """A variance or standard deviation parameter is not strictly positive."""


class DimensionMismatch(SlrLabError):
    """Vector or matrix shapes do not agree."""


class NotPositiveDefinite(SlrLabError):
    """A covariance matrix fails its required factorization."""


class NonPositiveShape(SlrLabError):
    """A Beta shape parameter is not strictly positive."""


class DomainError(SlrLabError):
    """An input lies outside the mathematical domain of an operation."""


class ConvergenceError(SlrLabError):
    """An iterative series failed to converge within its term cap."""


class DegenerateSample(SlrLabError):
    """A sample has no spread, so no density can be fitted to it."""


class SupportMismatch(SlrLabError):
    """Two density models were fitted on incompatible supports."""


class EmptyInput(SlrLabError):
    """An aggregation received no samples."""


class EmptyClass(SlrLabError):
    """A training set is missing one of the two class labels."""


class ConfigError(SlrLabError):
    """A configuration file is missing, malformed, or invalid."""
