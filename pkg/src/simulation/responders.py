"""
Cognitive and non-cognitive radar responders.

A responder maps an (N, m) probe record to an (N, m) response record.
"""
import logging
from abc import ABC, abstractmethod
from typing import Literal, Optional

import numpy as np

from ..exceptions import DatasetError
from .beam import BeamConfig, beam_allocate
from .budgets import RiccatiBudget
from .utilities import UtilitySpec, maximize_linear_budget

logger = logging.getLogger(__name__)

RandomKind = Literal['uniform-simplex', 'random-cobb-douglas']


def random_exponents(m: int, rng: np.random.Generator) -> np.ndarray:
    """Fresh U(0, 1) Cobb-Douglas exponents normalized to sum to one."""
    zeta = rng.uniform(0.0, 1.0, size=m)
    while np.any(zeta <= 0.0):
        zeta = rng.uniform(0.0, 1.0, size=m)
    return zeta / zeta.sum()


def uniform_simplex_draw(m: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. U(0, 1) coordinates, redrawn until they sum to at most one."""
    while True:
        beta = rng.uniform(0.0, 1.0, size=m)
        if beta.sum() <= 1.0:
            return beta


def random_responder(
    kind: RandomKind, m: int, rng: np.random.Generator, alpha=None, pbar: float = 1.0
) -> np.ndarray:
    """One response of a non-cognitive radar."""
    if m < 1:
        raise DatasetError("response dimension must be at least 1")
    if kind == 'uniform-simplex':
        return uniform_simplex_draw(m, rng)
    if kind == 'random-cobb-douglas':
        if alpha is None:
            raise DatasetError("random-cobb-douglas responses need the probe")
        return maximize_linear_budget(UtilitySpec.cobb_douglas(random_exponents(m, rng)), alpha, pbar)
    raise DatasetError(f"unknown random responder '{kind}'")


class Responder(ABC):
    """Black-box radar under test."""

    cognitive: bool = False

    @abstractmethod
    def respond(self, probes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Responses (N, m) to probes (N, m)."""


class CognitiveResponder(Responder):
    """Maximizes a fixed utility under alpha'beta <= pbar (waveform or beam)."""

    cognitive = True

    def __init__(self, utility: UtilitySpec, pbar: float = 1.0, beam: bool = False):
        self.utility = utility
        self.pbar = pbar
        self.beam = beam
        self._warned = False

    def respond(self, probes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        probes = np.atleast_2d(probes)
        if self.beam:
            cfg = BeamConfig(m=probes.shape[1], pbar=self.pbar)
            responses = np.array([beam_allocate(self.utility, alpha, cfg, warn=False) for alpha in probes])
            over = int(np.sum(responses.sum(axis=1) > 1.0))
            if over and not self._warned:
                logger.warning(f"{over} of {len(responses)} beam allocations exceed the epoch (sum > 1)")
                self._warned = True
            return responses
        return np.array([maximize_linear_budget(self.utility, alpha, self.pbar) for alpha in probes])


class NonlinearCognitiveResponder(Responder):
    """Maximizes a fixed utility under the Riccati spectral budget."""

    cognitive = True

    def __init__(self, utility: UtilitySpec, A, C, lambda_bar: float, upper):
        self.utility = utility
        self.A = np.asarray(A, dtype=float)
        self.C = np.asarray(C, dtype=float)
        self.lambda_bar = lambda_bar
        self.upper = np.asarray(upper, dtype=float)

    def budget(self, alpha) -> RiccatiBudget:
        return RiccatiBudget(self.A, self.C, alpha, self.lambda_bar, self.upper)

    def respond(self, probes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        responses = []
        for n, alpha in enumerate(np.atleast_2d(probes)):
            responses.append(self.budget(alpha).maximize(self.utility))
            logger.debug(f"Nonlinear response {n + 1}: {responses[-1]}")
        return np.array(responses)


class UniformSimplexResponder(Responder):
    """Ignores the probe; uniform allocation on the unit simplex."""

    def respond(self, probes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        probes = np.atleast_2d(probes)
        return np.array([uniform_simplex_draw(probes.shape[1], rng) for _ in probes])


class RandomCobbDouglasResponder(Responder):
    """Budget-exhausting allocation with preferences redrawn every epoch."""

    def __init__(self, pbar: float = 1.0):
        self.pbar = pbar

    def respond(self, probes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        probes = np.atleast_2d(probes)
        return np.array([
            random_responder('random-cobb-douglas', probes.shape[1], rng, alpha=alpha, pbar=self.pbar)
            for alpha in probes
        ])


def make_responder(
    kind: str,
    utility: Optional[UtilitySpec] = None,
    pbar: float = 1.0,
    beam: bool = False,
) -> Responder:
    """Linear-budget responders by name: cognitive, uniform-simplex, random-cobb-douglas."""
    if kind == 'cognitive':
        return CognitiveResponder(utility or UtilitySpec(), pbar=pbar, beam=beam)
    if kind == 'uniform-simplex':
        return UniformSimplexResponder()
    if kind == 'random-cobb-douglas':
        return RandomCobbDouglasResponder(pbar=pbar)
    raise DatasetError(f"unknown responder '{kind}'")
