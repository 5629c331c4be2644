"""
SPSA optimization of the probe record against the detector's Type-II error.

The probe record is held as an (N, m) array whose rows are the probes
alpha_n; flattening it row by row equals the column-major flattening of the
m x N probe matrix.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ..config import Config
from ..exceptions import ResampleLimitError
from ..revealed.afriat import cross_costs_from_arrays, garp_from_cross_costs
from ..simulation.responders import Responder
from ..simulation.scenarios import ScenarioConfig, sample_probes
from .detector import decide, min_perturbation_response, sample_m_response
from .ecdf import EmpiricalCdf
from .noise import NoiseModel, trial_rng

logger = logging.getLogger(__name__)


class SpsaConfig(BaseModel):
    """Step sizes and Monte-Carlo sizes of the probe optimizer.

    The step size is mu_k = mu / k**mu_exponent.
    """

    model_config = ConfigDict(extra='forbid')

    iterations: int = Field(default=200, ge=1)
    trials: int = Field(default=100, ge=1)
    gamma: float = Field(default=0.05, gt=0, lt=1)
    omega: float = Field(default=0.005, gt=0)
    mu: float = Field(default=0.005, ge=0)
    mu_exponent: float = Field(default=1.0, ge=0)
    n_samples: int = Field(default=Config.MC_SAMPLES, ge=1)
    common_random_numbers: bool = True
    record_cost: bool = True
    resample_cap: int = Field(default=Config.RESAMPLE_CAP, ge=1)
    floor: float = Field(default=Config.POSITIVITY_FLOOR, gt=0)
    log_every: int = Field(default=10, ge=1)
    seed: int = Field(default=Config.DEFAULT_SEED, ge=0)

    def step_size(self, k: int) -> float:
        return self.mu / k ** self.mu_exponent


@dataclass
class SpsaResult:
    """Trajectory (one row per iteration), final probe and gradient-evaluation count."""

    trajectory: pd.DataFrame
    final_probe: np.ndarray
    evaluations: int


def probe_columns(n_epochs: int, dim: int):
    return [f'alpha_{n + 1}_{i + 1}' for n in range(n_epochs) for i in range(dim)]


def estimate_type_ii(
    probes: np.ndarray,
    responder: Responder,
    noise: NoiseModel,
    cdf: EmpiricalCdf,
    trials: int,
    gamma: float,
    rng: np.random.Generator,
    resample_cap: Optional[int] = None,
) -> float:
    """Fraction of non-cognitive trials the detector accepts as cognitive.

    Each trial draws a response record until it violates GARP, so every trial
    belongs to the non-rationalizable set.

    Raises:
        ResampleLimitError: ``resample_cap`` draws in a row were GARP-consistent.
    """
    resample_cap = Config.RESAMPLE_CAP if resample_cap is None else resample_cap
    accepted, redraws = 0, 0
    for _ in range(trials):
        for attempt in range(resample_cap):
            responses = responder.respond(probes, rng)
            if not garp_from_cross_costs(cross_costs_from_arrays(probes, responses)).consistent:
                redraws += attempt
                break
        else:
            logger.error(f"Responder produced {resample_cap} GARP-consistent records in a row")
            raise ResampleLimitError(
                f"non-cognitive responder stayed rationalizable for {resample_cap} draws"
            )

        noisy = responses + noise.sample(responses.shape, rng)
        phi = min_perturbation_response(probes, noisy)
        if decide(phi, cdf, gamma).cognitive:
            accepted += 1

    if redraws:
        logger.warning(f"Resampled {redraws} GARP-consistent non-cognitive records")
    return accepted / trials


def rademacher(shape, rng: np.random.Generator) -> np.ndarray:
    """Independent +/-1 entries with equal probability."""
    return rng.integers(0, 2, size=shape) * 2.0 - 1.0


def spsa_gradient(
    cost: Callable[[np.ndarray], float],
    point: np.ndarray,
    omega: float,
    delta: np.ndarray,
    floor: Optional[float] = None,
) -> np.ndarray:
    """Two-sided simultaneous-perturbation gradient estimate.

    g = (J(P + omega Delta) - J(P - omega Delta)) / (2 omega Delta). Perturbed
    points are clipped to ``floor`` when given.
    """
    plus = point + omega * delta
    minus = point - omega * delta
    if floor is not None:
        plus = np.maximum(plus, floor)
        minus = np.maximum(minus, floor)
    return (cost(plus) - cost(minus)) / (2.0 * omega) / delta


def quadratic_surrogate(target) -> Callable[[np.ndarray], float]:
    """Smooth test cost J(P) = ||P - target||^2."""
    target = np.asarray(target, dtype=float)
    return lambda point: float(np.sum((np.asarray(point) - target) ** 2))


def spsa_optimize(
    initial: np.ndarray,
    cfg: SpsaConfig,
    responder: Responder,
    noise: NoiseModel,
) -> SpsaResult:
    """Minimize the empirical Type-II error over the probe record.

    Every cost evaluation samples the law of M at the probe being scored, on
    stream (k, 0), so P_k and both perturbed points P_k +/- omega Delta are
    each judged against their own threshold. Each iteration records
    J_hat(P_k) (not counted as a gradient evaluation), estimates the gradient
    from two cost evaluations and projects the update onto the positivity
    floor.
    """
    probe = np.maximum(np.atleast_2d(np.asarray(initial, dtype=float)), cfg.floor)
    n_epochs, dim = probe.shape
    rows = []
    evaluations = 0

    for k in range(1, cfg.iterations + 1):
        def cost(point: np.ndarray, stream: int) -> float:
            cdf = sample_m_response(point, noise, cfg.n_samples, trial_rng(cfg.seed, k, 0))
            return estimate_type_ii(
                point, responder, noise, cdf, cfg.trials, cfg.gamma,
                trial_rng(cfg.seed, k, stream), cfg.resample_cap,
            )

        j_hat = cost(probe, 1) if cfg.record_cost else float('nan')
        rows.append([k, j_hat, *probe.ravel()])

        delta = rademacher(probe.shape, trial_rng(cfg.seed, k, 2))
        calls = iter((3, 3) if cfg.common_random_numbers else (3, 4))
        gradient = spsa_gradient(lambda p: cost(p, next(calls)), probe, cfg.omega, delta, cfg.floor)
        evaluations += 2

        probe = np.maximum(probe - cfg.step_size(k) * gradient, cfg.floor)
        if k % cfg.log_every == 0 or k == 1:
            logger.info(f"SPSA iteration {k}/{cfg.iterations}: J_hat={j_hat:.3f}")

    trajectory = pd.DataFrame(rows, columns=['iter', 'J_hat', *probe_columns(n_epochs, dim)])
    trajectory['iter'] = trajectory['iter'].astype(int)
    return SpsaResult(trajectory=trajectory, final_probe=probe, evaluations=evaluations)


def run_probe_optimization(
    scenario: ScenarioConfig, responder: Responder, noise: NoiseModel, cfg: SpsaConfig
) -> SpsaResult:
    """Optimize from the scenario's probe record drawn on stream trial_seed(seed, 0)."""
    initial = sample_probes(scenario, trial_rng(cfg.seed, 0))
    logger.info(
        f"Optimizing a {initial.shape[0]}x{initial.shape[1]} probe record "
        f"(K={cfg.iterations}, S={cfg.trials}, sigma={noise.sigma:g})"
    )
    return spsa_optimize(initial, cfg, responder, noise)
