"""
Multi-target beam allocation with precision-priced probes.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ..config import Config
from ..exceptions import DatasetError, SingularMatrixError
from ..tracking.kalman import TrackerParams, solve_are, target_transition
from .utilities import UtilitySpec, maximize_linear_budget

logger = logging.getLogger(__name__)


def default_target(T: float = 1.0, measurement_var: float = 1.0) -> TrackerParams:
    """Constant-velocity target seen through a position-only sensor."""
    return TrackerParams(
        A=target_transition(T),
        C=np.array([[1.0, 0.0]]),
        Q=np.eye(2),
        R=np.array([[measurement_var]]),
    )


@dataclass
class BeamConfig:
    """m targets sharing one beam under an average-precision budget pbar."""

    m: int = 3
    pbar: float = 1.0
    targets: List[TrackerParams] = field(default_factory=list)

    def __post_init__(self):
        if self.m < 2:
            raise DatasetError("beam allocation needs at least two targets")
        if self.pbar <= 0:
            raise DatasetError("pbar must be positive")
        if not self.targets:
            self.targets = [default_target() for _ in range(self.m)]
        if len(self.targets) != self.m:
            raise DatasetError(f"{len(self.targets)} target models for m={self.m}")


def beam_allocate(utility: UtilitySpec, alpha, cfg: BeamConfig, warn: bool = True) -> np.ndarray:
    """Time allocation maximizing U subject to beta'alpha <= pbar.

    Only the precision budget constrains the program; a warning is logged
    when the allocation breaks the physical sum(beta) <= 1.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.size != cfg.m:
        raise DatasetError(f"probe has {alpha.size} entries for {cfg.m} targets")
    beta = maximize_linear_budget(utility, alpha, cfg.pbar)
    total = float(beta.sum())
    if warn and total > 1.0:
        logger.warning(f"Beam allocation uses {total:.4f} > 1 of the epoch")
    return beta


def precision_trace(covariance) -> float:
    """trace(Sigma^{-1}) of a predicted covariance.

    Raises:
        SingularMatrixError: the covariance is numerically singular.
    """
    covariance = np.atleast_2d(np.asarray(covariance, dtype=float))
    condition = np.linalg.cond(covariance)
    if not np.isfinite(condition) or condition > Config.CONDITION_LIMIT:
        raise SingularMatrixError(f"predicted covariance is singular (cond={condition:.3e})")
    return float(np.trace(np.linalg.inv(covariance)))


def predicted_precision_probe(
    cfg: BeamConfig, maneuver_covariances: Optional[Sequence[np.ndarray]] = None
) -> np.ndarray:
    """alpha(i) = trace of the steady-state predicted precision of target i.

    Args:
        cfg: Beam configuration with one tracker model per target.
        maneuver_covariances: Per-target state-noise covariances Q_n(i);
            the tracker models' own Q when omitted.
    """
    if maneuver_covariances is not None and len(maneuver_covariances) != cfg.m:
        raise DatasetError(f"{len(maneuver_covariances)} maneuver covariances for m={cfg.m}")

    alpha = np.empty(cfg.m)
    for i, target in enumerate(cfg.targets):
        params = target if maneuver_covariances is None else target.with_noise(Q=maneuver_covariances[i])
        alpha[i] = precision_trace(solve_are(params))
    return alpha
