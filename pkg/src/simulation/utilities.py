"""
Radar utility functions and their maximizers under a linear budget.
"""
import logging
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.optimize import minimize

from ..exceptions import DatasetError

logger = logging.getLogger(__name__)

UtilityKind = Literal['determinant', 'trace', 'cobb-douglas']


class UtilitySpec(BaseModel):
    """Utility family; ``exponents`` (zeta) only for Cobb-Douglas.

    Determinant utility of a diagonal covariance is the product of its
    spectrum, i.e. Cobb-Douglas with equal exponents; trace is the sum.
    """

    model_config = ConfigDict(extra='forbid', frozen=True)

    kind: UtilityKind = 'determinant'
    exponents: Optional[List[float]] = None

    @model_validator(mode='after')
    def _check_exponents(self) -> 'UtilitySpec':
        if self.kind == 'cobb-douglas':
            if not self.exponents:
                raise ValueError("cobb-douglas utility needs exponents")
            if any(z <= 0 for z in self.exponents):
                raise ValueError("cobb-douglas exponents must be strictly positive")
        elif self.exponents is not None:
            raise ValueError(f"{self.kind} utility takes no exponents")
        return self

    @classmethod
    def cobb_douglas(cls, exponents) -> 'UtilitySpec':
        return cls(kind='cobb-douglas', exponents=[float(z) for z in exponents])

    def weights(self, m: int) -> np.ndarray:
        """Cobb-Douglas exponents, with determinant read as all ones."""
        if self.kind == 'cobb-douglas':
            zeta = np.asarray(self.exponents, dtype=float)
            if zeta.size != m:
                raise DatasetError(f"{zeta.size} exponents for a {m}-dimensional response")
            return zeta
        return np.ones(m)

    def value(self, beta) -> float:
        beta = np.asarray(beta, dtype=float)
        if self.kind == 'trace':
            return float(np.sum(beta))
        return float(np.prod(np.power(np.maximum(beta, 0.0), self.weights(beta.size))))

    def log_value(self, beta) -> float:
        """log U for the multiplicative families (-inf on the boundary)."""
        beta = np.asarray(beta, dtype=float)
        if self.kind == 'trace':
            total = np.sum(beta)
            return float(np.log(total)) if total > 0 else -np.inf
        if np.any(beta <= 0):
            return -np.inf
        return float(self.weights(beta.size) @ np.log(beta))


def maximize_linear_budget(utility: UtilitySpec, alpha, pbar: float = 1.0) -> np.ndarray:
    """Maximize U over {beta >= 0 : alpha'beta <= pbar} in closed form.

    Cobb-Douglas: beta_i = (zeta_i / sum zeta) pbar / alpha_i (determinant is the
    equal-exponent case). Trace: the whole budget goes to the cheapest coordinate
    (first one on ties).
    """
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0):
        raise DatasetError("probe entries must be strictly positive")
    if pbar <= 0:
        raise DatasetError("budget pbar must be positive")

    if utility.kind == 'trace':
        beta = np.zeros_like(alpha)
        cheapest = int(np.argmin(alpha))
        beta[cheapest] = pbar / alpha[cheapest]
        return beta

    zeta = utility.weights(alpha.size)
    return (zeta / zeta.sum()) * pbar / alpha


def maximize_linear_budget_numeric(utility: UtilitySpec, alpha, pbar: float = 1.0) -> np.ndarray:
    """Numeric counterpart of :func:`maximize_linear_budget` (SLSQP).

    Multiplicative utilities are maximized through log U; the budget is an
    equality constraint since every utility here is increasing.
    """
    alpha = np.asarray(alpha, dtype=float)
    m = alpha.size
    upper = pbar / alpha

    if utility.kind == 'trace':
        def objective(beta):
            return -np.sum(beta)

        def gradient(beta):
            return -np.ones(m)
    else:
        zeta = utility.weights(m)

        def objective(beta):
            return -float(zeta @ np.log(beta))

        def gradient(beta):
            return -zeta / beta

    constraints = {'type': 'eq', 'fun': lambda beta: alpha @ beta - pbar, 'jac': lambda beta: alpha}
    bounds = [(1e-12 * u, u) for u in upper] if utility.kind != 'trace' else [(0.0, u) for u in upper]
    x0 = pbar / (m * alpha)

    result = minimize(
        objective, x0, jac=gradient, method='SLSQP', bounds=bounds,
        constraints=constraints, options={'ftol': 1e-15, 'maxiter': 1000},
    )
    if not result.success:
        logger.warning(f"SLSQP budget maximization: {result.message}")
    return np.clip(result.x, 0.0, upper)
