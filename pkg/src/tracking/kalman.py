"""
Linear-Gaussian tracker: Kalman recursion, algebraic Riccati fixed point and
algebraic Lyapunov equation.

State model used throughout::

    x_{k+1} = A x_k + w_k,   w_k ~ N(0, Q)
    y_k     = C x_k + v_k,   v_k ~ N(0, R)
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import block_diag

from ..config import Config
from ..exceptions import ConvergenceError, DatasetError, SingularMatrixError

logger = logging.getLogger(__name__)

PARAM_SYMMETRY_TOL = 1e-12


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


@dataclass(frozen=True)
class TrackerParams:
    """State-space matrices (A, C, Q, R).

    Q is only required to be positive semidefinite so that noise-free
    kinematics (Q = 0) can be represented; R must be positive definite.
    """

    A: np.ndarray
    C: np.ndarray
    Q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        A, C, Q, R = (np.atleast_2d(np.asarray(x, dtype=float)) for x in (self.A, self.C, self.Q, self.R))
        d, p = A.shape[0], C.shape[0]
        if A.shape != (d, d) or C.shape != (p, d) or Q.shape != (d, d) or R.shape != (p, p):
            raise DatasetError(
                f"inconsistent tracker dimensions: A{A.shape} C{C.shape} Q{Q.shape} R{R.shape}"
            )
        for name, matrix in (('Q', Q), ('R', R)):
            if np.max(np.abs(matrix - matrix.T)) > PARAM_SYMMETRY_TOL:
                raise DatasetError(f"{name} is not symmetric")
        if np.min(np.linalg.eigvalsh(R)) <= 0:
            raise DatasetError("R must be positive definite")
        if np.min(np.linalg.eigvalsh(Q)) < -PARAM_SYMMETRY_TOL:
            raise DatasetError("Q must be positive semidefinite")
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'C', C)
        object.__setattr__(self, 'Q', Q)
        object.__setattr__(self, 'R', R)

    @property
    def state_dim(self) -> int:
        return self.A.shape[0]

    @classmethod
    def from_spectra(cls, A, C, alpha, beta) -> 'TrackerParams':
        """Waveform setting: Q^{-1} = diag(alpha) (probe), R = diag(beta) (response)."""
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        if np.any(alpha <= 0):
            raise DatasetError("probe spectrum must be strictly positive")
        return cls(A=A, C=C, Q=np.diag(1.0 / alpha), R=np.diag(beta))

    def with_noise(self, Q=None, R=None) -> 'TrackerParams':
        return TrackerParams(
            A=self.A, C=self.C,
            Q=self.Q if Q is None else Q,
            R=self.R if R is None else R,
        )


@dataclass(frozen=True)
class KalmanState:
    """Conditional mean ``xhat`` and covariance ``Sigma``."""

    xhat: np.ndarray
    Sigma: np.ndarray

    @classmethod
    def initial(cls, xhat, Sigma) -> 'KalmanState':
        return cls(
            xhat=np.atleast_1d(np.asarray(xhat, dtype=float)),
            Sigma=np.atleast_2d(np.asarray(Sigma, dtype=float)),
        )


def target_transition(T: float = 1.0, axes: int = 1) -> np.ndarray:
    """Constant-velocity transition, one [[1, T], [0, 1]] block per axis."""
    block = np.array([[1.0, T], [0.0, 1.0]])
    return block_diag(*([block] * axes))


def kalman_step(state: KalmanState, y, params: TrackerParams) -> KalmanState:
    """One predict/update cycle of the Kalman filter.

    Raises:
        SingularMatrixError: innovation covariance condition number above the limit.
    """
    A, C, Q, R = params.A, params.C, params.Q, params.R
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.shape[0] != C.shape[0] or state.xhat.shape[0] != A.shape[0]:
        raise DatasetError(
            f"dimension mismatch: y{y.shape}, xhat{state.xhat.shape}, C{C.shape}"
        )

    predicted = A @ state.Sigma @ A.T + Q
    innovation_cov = C @ predicted @ C.T + R
    condition = np.linalg.cond(innovation_cov)
    if not np.isfinite(condition) or condition > Config.CONDITION_LIMIT:
        logger.error(f"Innovation covariance ill-conditioned (cond={condition:.3e})")
        raise SingularMatrixError(f"innovation covariance condition number {condition:.3e}")

    gain = np.linalg.solve(innovation_cov, C @ predicted).T
    x_pred = A @ state.xhat
    xhat = x_pred + gain @ (y - C @ x_pred)
    Sigma = _symmetrize(predicted - gain @ C @ predicted)
    return KalmanState(xhat=xhat, Sigma=Sigma)


def riccati_map(params: TrackerParams, Sigma: np.ndarray) -> np.ndarray:
    """One step of the predicted-covariance recursion."""
    A, C, Q, R = params.A, params.C, params.Q, params.R
    innovation_cov = C @ Sigma @ C.T + R
    correction = Sigma @ C.T @ np.linalg.solve(innovation_cov, C @ Sigma)
    return _symmetrize(A @ (Sigma - correction) @ A.T + Q)


def are_residual(params: TrackerParams, Sigma: np.ndarray) -> np.ndarray:
    """ARE(Sigma) = -Sigma + A(Sigma - Sigma C'(C Sigma C' + R)^{-1} C Sigma)A' + Q."""
    return riccati_map(params, Sigma) - Sigma


def solve_are(
    params: TrackerParams,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    initial: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Steady-state predicted covariance by fixed-point iteration.

    Starts from Q (or ``initial`` as a warm start) and returns the first
    iterate whose residual infinity-norm is at most ``tol``.

    Raises:
        ConvergenceError: the residual did not reach ``tol`` within ``max_iter`` steps.
    """
    tol = Config.ARE_TOL if tol is None else tol
    max_iter = Config.ARE_MAX_ITER if max_iter is None else max_iter
    if tol <= 0:
        raise ValueError("tol must be positive")

    Sigma = params.Q.copy() if initial is None else _symmetrize(np.asarray(initial, dtype=float))
    for _ in range(max_iter):
        nxt = riccati_map(params, Sigma)
        if np.max(np.abs(nxt - Sigma)) <= tol:
            return Sigma
        Sigma = nxt

    logger.error(f"ARE fixed point not reached in {max_iter} iterations")
    raise ConvergenceError(
        f"Riccati iteration did not converge within {max_iter} iterations "
        "(is [A, C] detectable and [A, sqrt(Q)] stabilizable?)"
    )


def riccati_iterates(params: TrackerParams, steps: int, initial: Optional[np.ndarray] = None) -> np.ndarray:
    """Successive infinity-norm differences of the Riccati iteration."""
    Sigma = params.Q.copy() if initial is None else np.asarray(initial, dtype=float)
    diffs = np.empty(steps)
    for k in range(steps):
        nxt = riccati_map(params, Sigma)
        diffs[k] = np.max(np.abs(nxt - Sigma))
        Sigma = nxt
    return diffs


def solve_lyapunov(
    A, Q, tol: Optional[float] = None, max_iter: Optional[int] = None
) -> Optional[np.ndarray]:
    """Solve Sigma = A Sigma A' + Q.

    Returns:
        The solution, or None when no finite solution exists (spectral radius of A >= 1).
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    tol = Config.ARE_TOL if tol is None else tol
    max_iter = Config.ARE_MAX_ITER if max_iter is None else max_iter

    radius = float(np.max(np.abs(np.linalg.eigvals(A))))
    if radius >= 1.0:
        logger.debug(f"Lyapunov equation has no finite solution (spectral radius {radius:.6f})")
        return None

    Sigma = Q.copy()
    for _ in range(max_iter):
        nxt = _symmetrize(A @ Sigma @ A.T + Q)
        if np.max(np.abs(nxt - Sigma)) <= tol:
            return nxt
        Sigma = nxt

    logger.warning(f"Lyapunov iteration exhausted {max_iter} steps (spectral radius {radius:.6f})")
    return None


def loewner_leq(lower: np.ndarray, upper: np.ndarray, tol: float = 1e-9) -> bool:
    """Whether ``upper - lower`` is positive semidefinite within ``tol``."""
    return bool(np.min(np.linalg.eigvalsh(_symmetrize(upper - lower))) >= -tol)

