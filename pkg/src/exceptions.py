"""
Exception hierarchy for the cognitive radar toolkit.

Outcomes that are answers rather than failures (an infeasible Afriat system,
a Lyapunov equation without a finite solution) are returned as ``None`` and
never raised.
"""
from typing import List, Optional


class CognitiveRadarError(Exception):
    """Base class for all toolkit errors."""


class DatasetError(CognitiveRadarError, ValueError):
    """Invalid probe/response data or dimension mismatch."""


class InactiveBudgetError(CognitiveRadarError, ValueError):
    """A nonlinear budget is not active at the observed response."""


class EmptyBudgetError(CognitiveRadarError, ValueError):
    """The nonlinear budget set contains no positive response."""


class ConvergenceError(CognitiveRadarError, RuntimeError):
    """An iterative routine exhausted its iteration budget."""


class SingularMatrixError(CognitiveRadarError, ArithmeticError):
    """A covariance that must be inverted is numerically singular."""


class AsymmetricMatrixError(CognitiveRadarError, ValueError):
    """A symmetric routine received an asymmetric matrix."""


class FeasibilityError(CognitiveRadarError, RuntimeError):
    """The feasibility routine failed numerically."""


class ResampleLimitError(CognitiveRadarError, RuntimeError):
    """A non-cognitive responder never produced a GARP violation."""


class ConfigError(CognitiveRadarError, ValueError):
    """Experiment configuration failed validation."""

    def __init__(self, message: str, details: Optional[List[str]] = None):
        super().__init__(message)
        self.details = details or []

    def __str__(self) -> str:
        if not self.details:
            return super().__str__()
        return super().__str__() + "\n" + "\n".join(self.details)
