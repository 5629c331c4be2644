"""
Scenario configuration and seeded dataset generation.
"""
import logging
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import Config
from ..exceptions import DatasetError
from ..revealed.dataset import ProbeResponseDataset
from .beam import BeamConfig, predicted_precision_probe
from .budgets import RiccatiBudget
from .responders import NonlinearCognitiveResponder, Responder, make_responder
from .utilities import UtilitySpec

logger = logging.getLogger(__name__)

ScenarioName = Literal['linear-waveform', 'nonlinear-waveform', 'beam']
ResponderKind = Literal['cognitive', 'uniform-simplex', 'random-cobb-douglas']

SCENARIO_DEFAULTS = {
    'linear-waveform': {
        'n_epochs': 50, 'm': 2, 'probe_low': 0.1, 'probe_high': 1.1,
        'utility': UtilitySpec(kind='determinant'),
    },
    'nonlinear-waveform': {
        'n_epochs': 50, 'm': 2, 'probe_low': 0.1, 'probe_high': 1.1,
        'utility': UtilitySpec(kind='determinant'),
        'A': [[1.0, 1.0], [0.0, 1.0]], 'C': [[1.0, 0.0], [0.0, 1.0]],
        'upper': [10.0, 10.0],
    },
    'beam': {
        'n_epochs': 20, 'm': 3, 'probe_low': 0.0, 'probe_high': 0.05,
        'utility': UtilitySpec.cobb_douglas([0.5, 1.0, 2.0]),
    },
}


class ScenarioConfig(BaseModel):
    """Parameters of one simulated probe/response record.

    Unset fields take the scenario's defaults.
    """

    model_config = ConfigDict(extra='forbid')

    scenario: ScenarioName = 'linear-waveform'
    n_epochs: Optional[int] = Field(default=None, ge=1)
    m: Optional[int] = Field(default=None, ge=1)
    utility: Optional[UtilitySpec] = None
    responder: ResponderKind = 'cognitive'
    pbar: float = Field(default=1.0, gt=0)
    probe_low: Optional[float] = Field(default=None, ge=0)
    probe_high: Optional[float] = Field(default=None, gt=0)
    # beam scenario: direct U(low, high) probes or tracker-derived precisions
    probe_source: Literal['uniform', 'tracker'] = 'uniform'
    maneuver_low: float = Field(default=0.5, gt=0)
    maneuver_high: float = Field(default=2.0, gt=0)
    # nonlinear-waveform scenario
    A: Optional[List[List[float]]] = None
    C: Optional[List[List[float]]] = None
    lambda_bar: float = Field(default=3.6, gt=0)
    upper: Optional[List[float]] = None
    max_probe_redraws: int = Field(default=1000, ge=1)
    seed: int = Field(default=Config.DEFAULT_SEED, ge=0)

    @model_validator(mode='after')
    def _apply_defaults(self) -> 'ScenarioConfig':
        for key, value in SCENARIO_DEFAULTS[self.scenario].items():
            if getattr(self, key) is None:
                setattr(self, key, value)

        if self.probe_high <= self.probe_low:
            raise ValueError("probe_high must exceed probe_low")
        if self.maneuver_high <= self.maneuver_low:
            raise ValueError("maneuver_high must exceed maneuver_low")
        if self.utility.kind == 'cobb-douglas' and len(self.utility.exponents) != self.m:
            raise ValueError(f"{len(self.utility.exponents)} exponents for m={self.m}")
        if self.scenario == 'beam' and self.m < 2:
            raise ValueError("beam scenario needs m >= 2")
        if self.scenario == 'nonlinear-waveform':
            if self.responder != 'cognitive':
                raise ValueError("nonlinear-waveform scenario only simulates the cognitive radar")
            if len(self.upper) != self.m:
                raise ValueError(f"upper has {len(self.upper)} entries for m={self.m}")
            if np.asarray(self.A).shape != (self.m, self.m) or np.asarray(self.C).shape != (self.m, self.m):
                raise ValueError(f"A and C must be {self.m}x{self.m}")
        return self

    @classmethod
    def for_scenario(cls, scenario: str, **overrides) -> 'ScenarioConfig':
        return cls(scenario=scenario, **overrides)


def _uniform_probes(cfg: ScenarioConfig, rng: np.random.Generator, size) -> np.ndarray:
    probes = rng.uniform(cfg.probe_low, cfg.probe_high, size=size)
    while np.any(probes <= 0.0):
        bad = probes <= 0.0
        probes[bad] = rng.uniform(cfg.probe_low, cfg.probe_high, size=int(bad.sum()))
    return probes


def _nonlinear_probe(cfg: ScenarioConfig, rng: np.random.Generator) -> np.ndarray:
    """Draw a probe whose budget is active: lambda_bar in (level at 0+, lambda_L]."""
    for _ in range(cfg.max_probe_redraws):
        alpha = _uniform_probes(cfg, rng, cfg.m)
        lower, lambda_l = RiccatiBudget(cfg.A, cfg.C, alpha, cfg.lambda_bar, cfg.upper).activity_window()
        if lower < cfg.lambda_bar <= lambda_l:
            return alpha
    raise DatasetError(
        f"no probe with a nonempty activity window in {cfg.max_probe_redraws} draws "
        f"(lambda_bar={cfg.lambda_bar})"
    )


def sample_probes(cfg: ScenarioConfig, rng: np.random.Generator) -> np.ndarray:
    """Probe record (N, m) for a scenario."""
    if cfg.scenario == 'nonlinear-waveform':
        return np.array([_nonlinear_probe(cfg, rng) for _ in range(cfg.n_epochs)])
    if cfg.scenario == 'beam' and cfg.probe_source == 'tracker':
        beam = BeamConfig(m=cfg.m, pbar=cfg.pbar)
        probes = []
        for _ in range(cfg.n_epochs):
            q = rng.uniform(cfg.maneuver_low, cfg.maneuver_high, size=cfg.m)
            probes.append(predicted_precision_probe(beam, [qi * np.eye(2) for qi in q]))
        return np.array(probes)
    return _uniform_probes(cfg, rng, (cfg.n_epochs, cfg.m))


def build_responder(cfg: ScenarioConfig) -> Responder:
    if cfg.scenario == 'nonlinear-waveform':
        return NonlinearCognitiveResponder(cfg.utility, cfg.A, cfg.C, cfg.lambda_bar, cfg.upper)
    return make_responder(cfg.responder, cfg.utility, pbar=cfg.pbar, beam=cfg.scenario == 'beam')


def generate_dataset(
    cfg: ScenarioConfig, rng: Optional[np.random.Generator] = None
) -> ProbeResponseDataset:
    """Simulate a probe/response record; the same seed gives a bit-identical dataset."""
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    probes = sample_probes(cfg, rng)
    responses = build_responder(cfg).respond(probes, rng)
    dataset = ProbeResponseDataset.from_arrays(probes, responses)
    logger.debug(
        f"Generated {cfg.scenario} dataset: N={dataset.n_epochs}, m={dataset.dim}, "
        f"responder={cfg.responder}"
    )
    return dataset
