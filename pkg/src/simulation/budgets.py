"""
Nonlinear (Riccati spectral) budget and its constrained maximizer.

For probe alpha the tracker runs with Q^{-1} = diag(alpha) and R = diag(beta).
The radar keeps the steady-state predicted covariance below a level:

    lambda_max(Sigma*(alpha, beta)) <= lambda_bar,   0 < beta <= beta_bar

The budget function g(beta) = lambda_max(Sigma*(alpha, beta)) - lambda_bar is
increasing in beta, so an increasing utility is maximized on g = 0.
"""
import logging
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ..config import Config
from ..exceptions import DatasetError, EmptyBudgetError
from ..revealed.afriat import NonlinearBudgetSpec
from ..revealed.dataset import ProbeResponseDataset
from ..tracking.eigen import lambda_max
from ..tracking.kalman import TrackerParams, solve_are
from .utilities import UtilitySpec

logger = logging.getLogger(__name__)

FLOOR_FRACTION = 1e-9
ROOT_XTOL = 1e-13
MAX_SWEEPS = 50
BUDGET_ARE_TOL = 1e-12
CORNER_TOL = 1e-10


class RiccatiBudget:
    """Spectral budget of one epoch.

    Args:
        A: State transition matrix.
        C: Observation matrix.
        alpha: Probe (spectrum of Q^{-1}).
        lambda_bar: Covariance level.
        upper: Box bound beta_bar on the response.
    """

    def __init__(self, A, C, alpha, lambda_bar: float, upper, are_tol: float = BUDGET_ARE_TOL):
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.C = np.atleast_2d(np.asarray(C, dtype=float))
        self.alpha = np.asarray(alpha, dtype=float)
        self.lambda_bar = float(lambda_bar)
        self.upper = np.asarray(upper, dtype=float)
        self.are_tol = are_tol

        if np.any(self.alpha <= 0):
            raise DatasetError("probe entries must be strictly positive")
        if np.any(self.upper <= 0):
            raise DatasetError("response upper bound must be strictly positive")
        if self.upper.shape != (self.C.shape[0],):
            raise DatasetError(
                f"upper bound has shape {self.upper.shape}, observation dimension is {self.C.shape[0]}"
            )
        self.floor = FLOOR_FRACTION * self.upper

    def params(self, beta) -> TrackerParams:
        return TrackerParams.from_spectra(self.A, self.C, self.alpha, beta)

    def steady_state(self, beta, initial: Optional[np.ndarray] = None) -> np.ndarray:
        """Steady-state predicted covariance for response ``beta``.

        ``initial`` seeds the Riccati iteration; the fixed point does not
        depend on it beyond ``are_tol``.
        """
        return solve_are(self.params(beta), tol=self.are_tol, initial=initial)

    def level(self, beta, initial: Optional[np.ndarray] = None) -> float:
        return lambda_max(self.steady_state(beta, initial))

    def __call__(self, beta) -> float:
        """g(beta) = lambda_max(Sigma*) - lambda_bar, from a cold start."""
        return self.level(beta) - self.lambda_bar

    def warm_chain(self) -> Callable[[np.ndarray], float]:
        """g for one maximization, each ARE solve seeded with the previous fixed point."""
        previous: Optional[np.ndarray] = None

        def g(beta) -> float:
            nonlocal previous
            previous = self.steady_state(beta, previous)
            return lambda_max(previous) - self.lambda_bar

        return g

    def activity_window(self) -> Tuple[float, float]:
        """(lambda_max as beta -> 0+, lambda_L = lambda_max at beta_bar).

        The budget is active at the maximizer iff lambda_bar lies in
        (lower, lambda_L].
        """
        return self.level(self.floor), self.level(self.upper)

    # ------------------------------------------------------------------
    # maximization
    # ------------------------------------------------------------------

    def maximize(self, utility: UtilitySpec) -> np.ndarray:
        """Maximize ``utility`` over the budget set.

        Raises:
            EmptyBudgetError: lambda_bar is below the level reached as beta -> 0+.
        """
        g = self.warm_chain()
        top = g(self.upper)
        if top <= CORNER_TOL:
            if top < -Config.ACTIVITY_TOL:
                logger.warning(
                    f"lambda_bar={self.lambda_bar} exceeds lambda_L={top + self.lambda_bar:.6f}; "
                    "budget inactive at the box corner"
                )
            return self.upper.copy()
        if g(self.floor) >= 0.0:
            raise EmptyBudgetError(
                f"budget set empty: lambda_bar={self.lambda_bar} at or below the beta -> 0 level"
            )

        scale = brentq(lambda t: g(t * self.upper), FLOOR_FRACTION, 1.0, xtol=ROOT_XTOL)
        beta = scale * self.upper
        m = beta.size
        if m == 1:
            return beta
        if m == 2:
            return self._pair_search(utility, beta, 0, 1, g)

        current = utility.log_value(beta)
        for sweep in range(MAX_SWEEPS):
            previous = current
            for i in range(m - 1):
                for j in range(i + 1, m):
                    beta = self._pair_search(utility, beta, i, j, g)
            current = utility.log_value(beta)
            if current - previous <= 1e-12:
                logger.debug(f"Coordinate exchange converged after {sweep + 1} sweeps")
                break
        return beta

    def _pair_search(
        self, utility: UtilitySpec, base: np.ndarray, i: int, j: int, g: Callable[[np.ndarray], float]
    ) -> np.ndarray:
        """Maximize along the active surface over coordinates (i, j), others fixed.

        beta_j is tied to beta_i by g = 0 (root found with Brent's method) and
        the utility is then maximized over beta_i with bounded Brent search.
        """
        lo_i, hi_i = self.floor[i], self.upper[i]
        lo_j, hi_j = self.floor[j], self.upper[j]

        def point(b_i: float, b_j: float) -> np.ndarray:
            p = base.copy()
            p[i], p[j] = b_i, b_j
            return p

        if g(point(hi_i, hi_j)) <= 0.0:
            return point(hi_i, hi_j)
        if g(point(lo_i, lo_j)) >= 0.0:
            return base

        def partner(b_i: float) -> float:
            if g(point(b_i, hi_j)) <= 0.0:
                return hi_j
            if g(point(b_i, lo_j)) >= 0.0:
                return lo_j
            return brentq(lambda b_j: g(point(b_i, b_j)), lo_j, hi_j, xtol=ROOT_XTOL)

        if g(point(lo_i, hi_j)) >= 0.0:
            left = lo_i
        else:
            left = brentq(lambda b_i: g(point(b_i, hi_j)), lo_i, hi_i, xtol=ROOT_XTOL)
        if g(point(hi_i, lo_j)) <= 0.0:
            right = hi_i
        else:
            right = brentq(lambda b_i: g(point(b_i, lo_j)), lo_i, hi_i, xtol=ROOT_XTOL)

        def objective(b_i: float) -> float:
            return -utility.log_value(point(b_i, partner(b_i)))

        candidates: List[float] = [left, right]
        if right - left > ROOT_XTOL:
            result = minimize_scalar(
                objective, bounds=(left, right), method='bounded',
                options={'xatol': 1e-10 * max(1.0, right)},
            )
            candidates.insert(0, float(result.x))
        best = min(candidates, key=objective)
        return point(best, partner(best))


def maximize_nonlinear_budget(
    utility: UtilitySpec, alpha, lambda_bar: float, upper, A, C
) -> np.ndarray:
    """Maximize U(beta) s.t. lambda_max(Sigma*(alpha, beta)) <= lambda_bar, beta <= upper."""
    return RiccatiBudget(A, C, alpha, lambda_bar, upper).maximize(utility)


def riccati_budget_spec(
    dataset: ProbeResponseDataset, A, C, lambda_bar: float, upper
) -> NonlinearBudgetSpec:
    """Per-epoch Riccati budgets of a dataset, for the nonlinear revealed-preference test."""
    return NonlinearBudgetSpec(
        [RiccatiBudget(A, C, alpha, lambda_bar, upper) for alpha in dataset.probes]
    )
