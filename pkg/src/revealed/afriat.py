"""
Nonparametric tests of constrained utility maximization.

The decision procedure is cyclical consistency: the weak revealed-preference
relation is closed transitively (Warshall) and the data pass when no chain of
weak preferences is closed by a strict one. Feasible datasets get an Afriat
certificate (u, lambda) whose multipliers come from a small linear program and
whose utility levels are shortest-path potentials on the cross-cost graph.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import linprog

from ..config import Config
from ..exceptions import DatasetError, FeasibilityError, InactiveBudgetError
from .dataset import ProbeResponseDataset

logger = logging.getLogger(__name__)

BudgetFunction = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class GarpVerdict:
    """Outcome of a GARP check.

    ``violating_cycle`` lists 0-based epoch positions t_0, ..., t_k such that
    each t_i weakly reveals t_{i+1} and t_k strictly reveals t_0.
    """

    consistent: bool
    violating_cycle: Optional[List[int]] = None

    def to_dict(self) -> dict:
        return {'consistent': self.consistent, 'violating_cycle': self.violating_cycle}


@dataclass(frozen=True)
class AfriatSolution:
    """Utility levels ``u`` and strictly positive multipliers ``lambda_``."""

    u: np.ndarray
    lambda_: np.ndarray

    def max_violation(self, cross_costs: np.ndarray) -> float:
        """Largest value of u_s - u_t - lambda_t a[t][s] over all pairs."""
        slack = self.u[None, :] - self.u[:, None] - self.lambda_[:, None] * cross_costs
        return float(np.max(slack))

    def to_dict(self) -> dict:
        return {'u': self.u.tolist(), 'lambda': self.lambda_.tolist()}


@dataclass
class NonlinearBudgetSpec:
    """Per-epoch budget functions g_t, increasing and active at beta_t."""

    functions: Sequence[BudgetFunction]
    activity_tol: float = field(default_factory=lambda: Config.ACTIVITY_TOL)

    def __len__(self) -> int:
        return len(self.functions)

    @classmethod
    def linear(cls, dataset: ProbeResponseDataset) -> 'NonlinearBudgetSpec':
        """Linear budgets g_t(beta) = alpha_t'(beta - beta_t)."""
        def make(alpha: np.ndarray, beta_t: np.ndarray) -> BudgetFunction:
            return lambda beta: float(alpha @ (np.asarray(beta, dtype=float) - beta_t))

        return cls([make(a, b) for a, b in zip(dataset.probes, dataset.responses)])


# ---------------------------------------------------------------------------
# Cross costs and revealed-preference relations
# ---------------------------------------------------------------------------

def cross_costs_from_arrays(probes, responses) -> np.ndarray:
    """a[t][s] = alpha_t'(beta_s - beta_t) for raw (N, m) arrays.

    No sign checks: noisy probes and responses are accepted.
    """
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    responses = np.atleast_2d(np.asarray(responses, dtype=float))
    if probes.shape != responses.shape:
        raise DatasetError(f"dimension mismatch: {probes.shape} vs {responses.shape}")
    spend = probes @ responses.T
    a = spend - np.diag(spend)[:, None]
    np.fill_diagonal(a, 0.0)
    return a


def cross_cost_matrix(dataset: ProbeResponseDataset) -> np.ndarray:
    """Return a with a[t][s] = alpha_t'(beta_s - beta_t); the diagonal is exactly 0."""
    return cross_costs_from_arrays(dataset.probes, dataset.responses)


def nonlinear_cross_costs(dataset: ProbeResponseDataset, budgets: NonlinearBudgetSpec) -> np.ndarray:
    """Return a[t][s] = g_t(beta_s) - g_t(beta_t) after checking budget activity."""
    n = dataset.n_epochs
    if len(budgets) != n:
        raise DatasetError(f"{len(budgets)} budget functions for {n} epochs")

    a = np.empty((n, n))
    for t, g in enumerate(budgets.functions):
        own = g(dataset.responses[t])
        if abs(own) > budgets.activity_tol:
            logger.error(f"Budget {t} inactive at its response: g_t(beta_t) = {own:.3e}")
            raise InactiveBudgetError(
                f"budget {t} is not active at beta_{t}: |g| = {abs(own):.3e} > {budgets.activity_tol:g}"
            )
        for s in range(n):
            a[t, s] = 0.0 if s == t else g(dataset.responses[s]) - own
    return a


def revealed_preference_relations(
    cross_costs: np.ndarray, tol: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Direct weak, direct strict and transitively closed weak relations.

    weak[t][s]: beta_s was affordable at epoch t (a[t][s] <= tol).
    strict[t][s]: beta_s was strictly cheaper at epoch t (a[t][s] < -tol).
    closure: transitive closure of ``weak`` (Warshall, O(N^3)).
    """
    tol = Config.GARP_TOL if tol is None else tol
    weak = cross_costs <= tol
    np.fill_diagonal(weak, True)
    strict = cross_costs < -tol
    np.fill_diagonal(strict, False)

    closure = weak.copy()
    for k in range(closure.shape[0]):
        closure |= np.outer(closure[:, k], closure[k, :])
    return weak, strict, closure


def _weak_path(weak: np.ndarray, start: int, goal: int) -> List[int]:
    """Shortest chain start -> goal in the direct weak relation (BFS)."""
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for nxt in np.flatnonzero(weak[node]):
            nxt = int(nxt)
            if nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    path = [goal]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def garp_from_cross_costs(cross_costs: np.ndarray, tol: Optional[float] = None) -> GarpVerdict:
    """Cyclical-consistency check on an arbitrary cross-cost matrix.

    Weak cycles (every comparison an equality) are consistent; a cycle is a
    violation only when it contains a strict comparison.
    """
    weak, strict, closure = revealed_preference_relations(cross_costs, tol)
    violations = np.argwhere(closure & strict.T)
    if violations.size == 0:
        return GarpVerdict(consistent=True)
    t, s = (int(i) for i in violations[0])
    return GarpVerdict(consistent=False, violating_cycle=_weak_path(weak, t, s))


def check_garp(dataset: ProbeResponseDataset, tol: Optional[float] = None) -> GarpVerdict:
    """GARP test for linear budgets alpha_t'beta <= alpha_t'beta_t."""
    verdict = garp_from_cross_costs(cross_cost_matrix(dataset), tol)
    logger.debug(f"GARP on {dataset.n_epochs} epochs: consistent={verdict.consistent}")
    return verdict


def check_nonlinear_garp(
    dataset: ProbeResponseDataset, budgets: NonlinearBudgetSpec, tol: Optional[float] = None
) -> GarpVerdict:
    """GARP for nonlinear budgets: g_t(beta_j) <= g_t(beta_t) implies g_j(beta_t) >= 0 along chains."""
    return garp_from_cross_costs(nonlinear_cross_costs(dataset, budgets), tol)


# ---------------------------------------------------------------------------
# Afriat certificates
# ---------------------------------------------------------------------------

def _afriat_multipliers(cross_costs: np.ndarray) -> np.ndarray:
    """Multipliers lambda_t >= 1 from the Afriat LP (minimum total multiplier)."""
    n = cross_costs.shape[0]
    rows, rhs = [], []
    for t in range(n):
        for s in range(n):
            if s == t:
                continue
            row = np.zeros(2 * n)
            row[s] += 1.0
            row[t] -= 1.0
            row[n + t] = -cross_costs[t, s]
            rows.append(row)
            rhs.append(0.0)

    cost = np.concatenate([np.zeros(n), np.ones(n)])
    bounds = [(None, None)] * n + [(1.0, None)] * n
    result = linprog(
        cost,
        A_ub=np.array(rows),
        b_ub=np.array(rhs),
        bounds=bounds,
        method='highs',
        options={'primal_feasibility_tolerance': 1e-10, 'dual_feasibility_tolerance': 1e-10},
    )
    if result.status != 0:
        raise FeasibilityError(f"Afriat LP failed on GARP-consistent data: {result.message}")
    return np.asarray(result.x[n:], dtype=float)


def _shortest_path_levels(cross_costs: np.ndarray, lambda_: np.ndarray) -> np.ndarray:
    """Utility levels u_s = min over t of the shortest path t -> s (Floyd-Warshall)."""
    dist = lambda_[:, None] * cross_costs
    np.fill_diagonal(dist, 0.0)
    for k in range(dist.shape[0]):
        dist = np.minimum(dist, dist[:, k, None] + dist[None, k, :])
    scale = max(1.0, float(np.max(np.abs(dist))))
    if np.min(np.diag(dist)) < -1e-9 * scale:
        raise FeasibilityError("multipliers leave a negative cycle in the cross-cost graph")
    return dist.min(axis=0)


def tie_snapped_costs(cross_costs: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Cross costs with near ties in [-tol, 0) raised to 0.

    The GARP check counts such comparisons as weak only; the Afriat system
    built on the snapped matrix has the same strict relation, so it is
    feasible exactly when GARP holds at ``tol``.
    """
    tol = Config.GARP_TOL if tol is None else tol
    snapped = np.array(cross_costs, dtype=float)
    snapped[(snapped < 0.0) & (snapped >= -tol)] = 0.0
    return snapped


def solve_afriat_from_cross_costs(
    cross_costs: np.ndarray, tol: Optional[float] = None
) -> Optional[AfriatSolution]:
    """Afriat certificate for a cross-cost matrix, or None when infeasible.

    The certificate satisfies the inequalities of ``tie_snapped_costs``; on
    the raw matrix it may exceed zero by at most lambda_t * tol.
    """
    n = cross_costs.shape[0]
    if n == 1:
        return AfriatSolution(u=np.zeros(1), lambda_=np.ones(1))
    if not garp_from_cross_costs(cross_costs, tol).consistent:
        return None

    snapped = tie_snapped_costs(cross_costs, tol)
    lambda_ = _afriat_multipliers(snapped)
    u = _shortest_path_levels(snapped, lambda_)
    u = u - u.max()
    solution = AfriatSolution(u=u, lambda_=lambda_)

    violation = solution.max_violation(snapped)
    if violation > 1e-9:
        logger.error(f"Afriat certificate violates an inequality by {violation:.3e}")
        raise FeasibilityError(f"certificate violation {violation:.3e} exceeds 1e-9")
    return solution


def solve_afriat(dataset: ProbeResponseDataset, tol: Optional[float] = None) -> Optional[AfriatSolution]:
    """Solve the Afriat inequalities u_s - u_t - lambda_t alpha_t'(beta_s - beta_t) <= 0.

    Returns:
        The certificate, or None when the data are not rationalizable.

    Raises:
        FeasibilityError: GARP holds but no valid certificate could be built.
    """
    return solve_afriat_from_cross_costs(cross_cost_matrix(dataset), tol)


def solve_nonlinear_afriat(
    dataset: ProbeResponseDataset, budgets: NonlinearBudgetSpec, tol: Optional[float] = None
) -> Optional[AfriatSolution]:
    """Solve u_s - u_t - lambda_t g_t(beta_s) <= 0 for nonlinear budgets."""
    return solve_afriat_from_cross_costs(nonlinear_cross_costs(dataset, budgets), tol)


# ---------------------------------------------------------------------------
# Utility reconstruction
# ---------------------------------------------------------------------------

def reconstruct_utility(solution: AfriatSolution, dataset: ProbeResponseDataset, beta) -> np.ndarray:
    """Evaluate min_t {u_t + lambda_t alpha_t'(beta - beta_t)}.

    ``beta`` may be a single m-vector (returns a 0-d array) or a (k, m) batch.
    The result is concave and increasing in beta.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape[-1] != dataset.dim:
        raise DatasetError(f"beta has dimension {beta.shape[-1]}, dataset has {dataset.dim}")
    points = np.atleast_2d(beta)
    spend = points @ dataset.probes.T - np.sum(dataset.probes * dataset.responses, axis=1)[None, :]
    values = np.min(solution.u[None, :] + solution.lambda_[None, :] * spend, axis=1)
    return values[0] if beta.ndim == 1 else values


def reconstruct_nonlinear_utility(
    solution: AfriatSolution, dataset: ProbeResponseDataset, budgets: NonlinearBudgetSpec, beta
) -> np.ndarray:
    """Evaluate min_t {u_t + lambda_t (g_t(beta) - g_t(beta_t))}.

    With budgets exactly active (g_t(beta_t) = 0) this is min_t {u_t + lambda_t g_t(beta)}.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape[-1] != dataset.dim:
        raise DatasetError(f"beta has dimension {beta.shape[-1]}, dataset has {dataset.dim}")
    points = np.atleast_2d(beta)
    own = np.array([g(dataset.responses[t]) for t, g in enumerate(budgets.functions)])
    values = np.array([
        np.min([
            solution.u[t] + solution.lambda_[t] * (g(point) - own[t])
            for t, g in enumerate(budgets.functions)
        ])
        for point in points
    ])
    return values[0] if beta.ndim == 1 else values


def utility_grid(
    solution: AfriatSolution,
    dataset: ProbeResponseDataset,
    beta_1: Sequence[float],
    beta_2: Sequence[float],
    budgets: Optional[NonlinearBudgetSpec] = None,
) -> pd.DataFrame:
    """Reconstructed utility on a rectangular grid (m = 2), long format.

    Returns:
        DataFrame with columns ``beta_1, beta_2, utility``.
    """
    if dataset.dim != 2:
        raise DatasetError("utility contour grids need a 2-dimensional response")
    b1, b2 = np.meshgrid(np.asarray(beta_1, dtype=float), np.asarray(beta_2, dtype=float), indexing='ij')
    points = np.column_stack([b1.ravel(), b2.ravel()])
    if budgets is None:
        values = reconstruct_utility(solution, dataset, points)
    else:
        values = reconstruct_nonlinear_utility(solution, dataset, budgets, points)
    return pd.DataFrame({'beta_1': points[:, 0], 'beta_2': points[:, 1], 'utility': values})
