"""
Dense-tableau phase-1 simplex, used as an independent feasibility oracle for
the Afriat inequalities.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from ..exceptions import ConvergenceError

logger = logging.getLogger(__name__)

PIVOT_EPS = 1e-12


def _pivot(tableau: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tableau[row, :] /= tableau[row, col]
    for i in range(tableau.shape[0]):
        if i != row and tableau[i, col] != 0.0:
            tableau[i, :] -= tableau[i, col] * tableau[row, :]
    basis[row] = col


def phase_one_feasible(
    A_ub: np.ndarray, b_ub: np.ndarray, feas_tol: float = 1e-9, max_pivots: int = 50000
) -> Tuple[bool, Optional[np.ndarray]]:
    """Decide whether {x >= 0 : A_ub x <= b_ub} is nonempty.

    Slack variables start basic on rows with b >= 0; rows with b < 0 are
    negated and get an artificial variable. The sum of artificials is then
    minimized with Bland's rule, which cannot cycle.

    Args:
        A_ub: (k, n) constraint matrix.
        b_ub: (k,) right-hand side.
        feas_tol: largest phase-1 optimum still counted as zero.
        max_pivots: pivot budget.

    Returns:
        (feasible, x) with ``x`` a feasible point when one exists.
    """
    A = np.asarray(A_ub, dtype=float)
    b = np.asarray(b_ub, dtype=float).ravel()
    k, n = A.shape

    negative = np.flatnonzero(b < 0)
    n_art = negative.size
    width = n + k + n_art
    tableau = np.zeros((k + 1, width + 1))
    tableau[:k, :n] = A
    tableau[:k, n:n + k] = np.eye(k)
    tableau[:k, -1] = b
    tableau[negative, :] *= -1.0

    basis = n + np.arange(k)
    for j, row in enumerate(negative):
        col = n + k + j
        tableau[row, col] = 1.0
        basis[row] = col

    # phase-1 objective row: reduced costs of min sum(artificials)
    tableau[k, n + k:width] = 1.0
    for row in negative:
        tableau[k, :] -= tableau[row, :]

    for _ in range(max_pivots):
        reduced = tableau[k, :width]
        entering = np.flatnonzero(reduced < -PIVOT_EPS)
        if entering.size == 0:
            break
        col = int(entering[0])

        column = tableau[:k, col]
        candidates = np.flatnonzero(column > PIVOT_EPS)
        if candidates.size == 0:
            # unbounded direction; cannot happen for a phase-1 objective bounded below by 0
            break
        ratios = tableau[candidates, -1] / column[candidates]
        best = ratios.min()
        ties = candidates[ratios <= best + PIVOT_EPS * max(1.0, abs(best))]
        row = int(ties[np.argmin(basis[ties])])
        _pivot(tableau, basis, row, col)
    else:
        raise ConvergenceError(f"phase-1 simplex exceeded {max_pivots} pivots")

    objective = -tableau[k, -1]
    scale = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    if objective > feas_tol * scale:
        logger.debug(f"Phase-1 optimum {objective:.3e}: infeasible")
        return False, None

    solution = np.zeros(width)
    solution[basis] = tableau[:k, -1]
    return True, solution[:n]


def afriat_lp_feasible(cross_costs: np.ndarray, feas_tol: float = 1e-9) -> bool:
    """Whether the Afriat system u_s - u_t - lambda_t a[t][s] <= 0 has lambda_t > 0.

    The system is homogeneous, so lambda_t > 0 is normalized to lambda_t >= 1.
    Variables are written as u = u_plus - u_minus and lambda = 1 + mu with all
    parts nonnegative.
    """
    a = np.asarray(cross_costs, dtype=float)
    n = a.shape[0]
    if n == 1:
        return True

    rows, rhs = [], []
    for t in range(n):
        for s in range(n):
            if s == t:
                continue
            row = np.zeros(3 * n)
            row[s] += 1.0
            row[t] -= 1.0
            row[n + s] -= 1.0
            row[n + t] += 1.0
            row[2 * n + t] = -a[t, s]
            rows.append(row)
            rhs.append(a[t, s])
    feasible, _ = phase_one_feasible(np.array(rows), np.array(rhs), feas_tol=feas_tol)
    return feasible
