"""Exception hierarchy.

Every error raised by the package derives from PeriodLabError so callers
(CLI, HTTP service) can map failures to exit codes / status codes uniformly.
"""


class PeriodLabError(Exception):
    """Base class for all package errors."""


class ParseError(PeriodLabError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class CurveError(PeriodLabError):
    """Invalid curve data: degenerate fiber, bad base point, non-squarefree f."""


class ContinuationError(PeriodLabError):
    """Analytic continuation could not separate sheets along a path."""


class CycleValidationError(PeriodLabError):
    """A cycle failed lift consistency, closedness, or clearance checks.

    segment_index identifies the first offending edge when known.
    """

    def __init__(self, message, segment_index=None):
        self.segment_index = segment_index
        self.message = message
        super().__init__(message)


class HomologyError(PeriodLabError):
    """Intersection-number degeneracy or non-integer homology arithmetic."""


class QuadratureError(PeriodLabError):
    """Period integration failed to converge to the requested tolerance."""


class LinearAlgebraError(PeriodLabError):
    """Refused matrix inversion (singular or condition number too large)."""

    def __init__(self, message, condition=None):
        self.condition = condition
        super().__init__(message)


class TransformError(PeriodLabError):
    """A homology transform is not symplectic or not integral."""
