"""
Small symmetric eigenvalue routines (cyclic Jacobi).
"""
import logging
from typing import Optional

import numpy as np

from ..config import Config
from ..exceptions import AsymmetricMatrixError, ConvergenceError

logger = logging.getLogger(__name__)

MAX_SWEEPS = 100


def jacobi_eigenvalues(S, tol: Optional[float] = None, symmetry_tol: Optional[float] = None) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending.

    Cyclic Jacobi: sweeps over the upper triangle, annihilating every
    off-diagonal entry larger than ``tol`` (relative to the Frobenius norm)
    with a plane rotation, until none remains.

    Raises:
        AsymmetricMatrixError: ``S`` departs from symmetry by more than ``symmetry_tol``.
    """
    tol = Config.JACOBI_TOL if tol is None else tol
    symmetry_tol = Config.SYMMETRY_TOL if symmetry_tol is None else symmetry_tol

    S = np.atleast_2d(np.asarray(S, dtype=float))
    if S.shape[0] != S.shape[1]:
        raise AsymmetricMatrixError(f"matrix is not square: {S.shape}")
    asymmetry = float(np.max(np.abs(S - S.T))) if S.size else 0.0
    if asymmetry > symmetry_tol:
        raise AsymmetricMatrixError(f"matrix asymmetry {asymmetry:.3e} exceeds {symmetry_tol:g}")

    a = 0.5 * (S + S.T)
    n = a.shape[0]
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    for _ in range(MAX_SWEEPS):
        off = np.abs(np.triu(a, 1))
        if n < 2 or off.max() <= threshold:
            return np.sort(np.diag(a))
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= threshold:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rotation = np.eye(n)
                rotation[p, p] = rotation[q, q] = c
                rotation[p, q] = s
                rotation[q, p] = -s
                a = rotation.T @ a @ rotation
                a[p, q] = a[q, p] = 0.0

    logger.error(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    raise ConvergenceError("cyclic Jacobi did not converge")


def lambda_max(S, tol: Optional[float] = None) -> float:
    """Largest eigenvalue of a symmetric matrix."""
    return float(jacobi_eigenvalues(S, tol)[-1])
