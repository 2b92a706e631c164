"""Exception types shared across the package."""


class AloglmError(Exception):
    """Base class for all library errors."""


class InvalidConfig(AloglmError):
    """A parameter or configuration value is out of its legal range."""


class InvalidCorrelation(InvalidConfig):
    """Design correlation parameter outside the range that keeps the covariance PD."""


class DimensionMismatch(AloglmError):
    """Array shapes are not conformable."""


class NotPositiveDefinite(AloglmError):
    """Cholesky failed even after the single jitter attempt."""


class SingularInnerMatrix(AloglmError):
    """The n-by-n inner system of the low-rank inversion path is numerically singular."""


class SingularSystem(AloglmError):
    """The hat-matrix system could not be factorized."""


class UnsupportedResponse(AloglmError):
    """A response value lies outside the loss family's support."""


class UnsupportedFamily(AloglmError):
    """Operation not defined for this loss family."""


class NonSmoothAtZero(AloglmError):
    """Derivative of a nonsmooth penalty requested at an exact zero coordinate."""


class ProxNoConvergence(AloglmError):
    """Scalar Newton solve inside a proximal map failed to converge (indicates a bug)."""


class DegenerateProblem(AloglmError):
    """Unpenalized Gaussian problem with singular Gram matrix."""


class IncompatibleMetric(AloglmError):
    """Error metric not defined for this loss family."""


class ParseError(AloglmError):
    """CSV cell failed to parse; message carries row/column location."""


class RaggedRows(ParseError):
    """CSV rows have inconsistent field counts."""
