"""
Statistical detection of a utility maximizer observed through noise.

The test statistic is the minimum perturbation Phi* that makes the noisy
Afriat system feasible; it is calibrated against the law of the noise
functional M, estimated by Monte Carlo.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Literal, Optional, Sequence

import numpy as np
import pandas as pd

from ..config import Config
from ..exceptions import DatasetError
from ..revealed.afriat import cross_costs_from_arrays, garp_from_cross_costs
from ..simulation.responders import Responder
from ..simulation.scenarios import ScenarioConfig, sample_probes
from .ecdf import EmpiricalCdf
from .noise import NoiseModel, NoiseTarget, trial_seed

logger = logging.getLogger(__name__)

Decision = Literal['H0', 'H1']

# (L x N x N) work arrays are built in chunks of at most this many entries
CHUNK_ENTRIES = 2_000_000

REPORT_COLUMNS = ['trial', 'phi_star', 'statistic', 'decision', 'sigma', 'gamma', 'seed']


@dataclass(frozen=True)
class DetectorOutcome:
    """Phi*, the tail statistic P(M >= Phi*), the decision and gamma."""

    phi_star: float
    statistic: float
    decision: Decision
    gamma: float

    @property
    def cognitive(self) -> bool:
        return self.decision == 'H0'

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# Minimum perturbation
# ---------------------------------------------------------------------------

def perturbed_feasible(cross_costs: np.ndarray, phi: float, tol: Optional[float] = None) -> bool:
    """Whether the Afriat system with cross-costs a[t][s] + phi (t != s) is feasible."""
    shifted = cross_costs + phi
    np.fill_diagonal(shifted, 0.0)
    return garp_from_cross_costs(shifted, tol).consistent


def min_perturbation(cross_costs: np.ndarray, tol: Optional[float] = None) -> float:
    """Smallest phi >= 0 making the relaxed Afriat system feasible (bisection).

    Feasibility is monotone in phi and holds at max(0, max -a[t][s]), where no
    strict comparison is left.
    """
    tol = Config.PHI_TOL if tol is None else tol
    a = np.asarray(cross_costs, dtype=float)
    if a.shape[0] < 2 or perturbed_feasible(a, 0.0):
        return 0.0

    off = ~np.eye(a.shape[0], dtype=bool)
    lo, hi = 0.0, max(0.0, float(np.max(-a[off])))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if perturbed_feasible(a, mid):
            hi = mid
        else:
            lo = mid
    return hi


def min_perturbation_response(probes, noisy_responses, tol: Optional[float] = None) -> float:
    """Phi* for clean probes and noisy responses (which may be negative)."""
    return min_perturbation(cross_costs_from_arrays(probes, noisy_responses), tol)


def min_perturbation_probe(noisy_probes, responses, tol: Optional[float] = None) -> float:
    """Phi* for noisy probes and clean responses."""
    return min_perturbation(cross_costs_from_arrays(noisy_probes, responses), tol)


# ---------------------------------------------------------------------------
# Law of M
# ---------------------------------------------------------------------------

def _max_off_diagonal(stack: np.ndarray) -> np.ndarray:
    n = stack.shape[1]
    masked = np.where(np.eye(n, dtype=bool)[None, :, :], -np.inf, stack)
    return masked.reshape(stack.shape[0], -1).max(axis=1)


def _chunks(total: int, n_epochs: int):
    size = max(1, CHUNK_ENTRIES // max(1, n_epochs * n_epochs))
    start = 0
    while start < total:
        stop = min(total, start + size)
        yield stop - start
        start = stop


def sample_m_response(probes, noise: NoiseModel, n_samples: int, rng: np.random.Generator) -> EmpiricalCdf:
    """L draws of M = max_{t != s} alpha_t'(eps_t - eps_s)."""
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    if n_samples < 1:
        raise DatasetError("need at least one Monte-Carlo sample")
    n, m = probes.shape
    if n < 2:
        return EmpiricalCdf(np.zeros(n_samples))

    draws = []
    for size in _chunks(n_samples, n):
        eps = noise.sample((size, n, m), rng)
        # cross[l, t, s] = alpha_t' eps_s
        cross = np.einsum('tm,lsm->lts', probes, eps)
        own = np.einsum('ltt->lt', cross)
        draws.append(_max_off_diagonal(own[:, :, None] - cross))
    return EmpiricalCdf(np.concatenate(draws))


def sample_m_probe(responses, noise: NoiseModel, n_samples: int, rng: np.random.Generator) -> EmpiricalCdf:
    """L draws of M = max_{t != s} eps_t'(beta_t - beta_s)."""
    responses = np.atleast_2d(np.asarray(responses, dtype=float))
    if n_samples < 1:
        raise DatasetError("need at least one Monte-Carlo sample")
    n, m = responses.shape
    if n < 2:
        return EmpiricalCdf(np.zeros(n_samples))

    draws = []
    for size in _chunks(n_samples, n):
        eps = noise.sample((size, n, m), rng)
        # cross[l, t, s] = eps_t' beta_s
        cross = np.einsum('ltm,sm->lts', eps, responses)
        own = np.einsum('ltt->lt', cross)
        draws.append(_max_off_diagonal(own[:, :, None] - cross))
    return EmpiricalCdf(np.concatenate(draws))


# ---------------------------------------------------------------------------
# Decision and bounds
# ---------------------------------------------------------------------------

def decide(phi_star: float, cdf: EmpiricalCdf, gamma: float) -> DetectorOutcome:
    """H0 (utility maximizer) iff P_hat(M >= Phi*) > gamma; ties go to H1.

    The statistic is the closed upper tail of the empirical law of M. It equals
    1 - F_hat(Phi*) except when Phi* coincides with a sample, where the
    closed tail also counts the sample itself.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    statistic = cdf.upper_tail(phi_star)
    decision: Decision = 'H0' if statistic > gamma else 'H1'
    return DetectorOutcome(phi_star=float(phi_star), statistic=statistic, decision=decision, gamma=gamma)


def type_i_lower_bound(phi_star: float, probes) -> float:
    """Analytical lower bound on the false-alarm probability under unit Gaussian noise."""
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    if probes.size == 0:
        raise DatasetError("type-I bound needs at least one probe")
    if phi_star < 0:
        raise ValueError("phi_star must be nonnegative")

    sq_norms = np.sum(probes ** 2, axis=1)
    tails = (
        np.sqrt(2.0 / np.pi) * np.sqrt(2.0 * sq_norms) * np.exp(-phi_star ** 2 / (4.0 * sq_norms))
        / (phi_star + np.sqrt(phi_star ** 2 + 8.0 * sq_norms))
    )
    return float(1.0 - np.prod(1.0 - tails))


# ---------------------------------------------------------------------------
# One Monte-Carlo trial
# ---------------------------------------------------------------------------

def detect(
    probes,
    responses,
    noise: NoiseModel,
    target: NoiseTarget,
    gamma: float,
    n_samples: int,
    rng: np.random.Generator,
    phi_offset: float = 0.0,
) -> DetectorOutcome:
    """Corrupt one side of a clean record with noise and run the matching detector.

    ``phi_offset`` is added to Phi* before the decision (tightness studies).
    """
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    responses = np.atleast_2d(np.asarray(responses, dtype=float))
    if target == 'response':
        noisy = responses + noise.sample(responses.shape, rng)
        phi = min_perturbation_response(probes, noisy)
        cdf = sample_m_response(probes, noise, n_samples, rng)
    elif target == 'probe':
        noisy = probes + noise.sample(probes.shape, rng)
        phi = min_perturbation_probe(noisy, responses)
        cdf = sample_m_probe(responses, noise, n_samples, rng)
    else:
        raise ValueError(f"unknown noise target '{target}'")
    return decide(phi + phi_offset, cdf, gamma)


def run_detection_trial(
    scenario: ScenarioConfig,
    responder: Responder,
    noise: NoiseModel,
    target: NoiseTarget,
    gamma: float,
    n_samples: int,
    rng: np.random.Generator,
    phi_offset: float = 0.0,
) -> DetectorOutcome:
    """Simulate a record from ``responder`` and detect it through noise."""
    probes = sample_probes(scenario, rng)
    responses = responder.respond(probes, rng)
    return detect(probes, responses, noise, target, gamma, n_samples, rng, phi_offset)


def detection_sweep(
    scenario: ScenarioConfig,
    responder: Responder,
    sigma_grid: Sequence[float],
    target: NoiseTarget,
    gamma: float,
    trials: int,
    n_samples: int,
    root_seed: int,
    phi_offset: float = 0.0,
) -> pd.DataFrame:
    """Detector report over a noise grid, one row per (sigma, trial).

    Trial ``i`` at grid position ``g`` runs on the stream trial_seed(root, g, i),
    recorded in the ``seed`` column.
    """
    rows = []
    for g, sigma in enumerate(sigma_grid):
        noise = NoiseModel(sigma=sigma)
        for i in range(trials):
            seed = trial_seed(root_seed, g, i)
            outcome = run_detection_trial(
                scenario, responder, noise, target, gamma, n_samples,
                np.random.default_rng(seed), phi_offset,
            )
            rows.append([i + 1, outcome.phi_star, outcome.statistic, outcome.decision, sigma, gamma, seed])
        logger.info(f"Detector sweep sigma={sigma:g}: {trials} trials done")
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)
