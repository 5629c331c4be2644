"""
Shared fixtures for the test suite.
"""
import logging

import numpy as np
import pytest

from src.revealed import ProbeResponseDataset
from src.simulation import ScenarioConfig, UtilitySpec, generate_dataset

logging.getLogger('src').setLevel(logging.WARNING)


@pytest.fixture
def rng():
    """Fresh seeded generator per test."""
    return np.random.default_rng(12345)


@pytest.fixture
def violating_dataset():
    """Two epochs that reveal each other strictly: a = [[0, -1], [-1, 0]]."""
    return ProbeResponseDataset.from_arrays(
        probes=[[1.0, 1.0], [1.0, 3.0]],
        responses=[[2.0, 0.0], [0.0, 1.0]],
    )


@pytest.fixture
def cognitive_dataset():
    """Linear-budget determinant radar, 20 epochs."""
    cfg = ScenarioConfig(scenario='linear-waveform', n_epochs=20, seed=3)
    return generate_dataset(cfg)


@pytest.fixture
def cobb_douglas_dataset():
    cfg = ScenarioConfig(
        scenario='linear-waveform', n_epochs=50, seed=11, utility=UtilitySpec.cobb_douglas([0.5, 1.0])
    )
    return generate_dataset(cfg)


@pytest.fixture
def make_random_dataset():
    """Factory: random probes with scaled-simplex responses (GARP verdict varies)."""
    def make(rng, n_epochs: int, m: int) -> ProbeResponseDataset:
        probes = rng.uniform(0.1, 1.1, size=(n_epochs, m))
        responses = rng.dirichlet(np.ones(m), size=n_epochs) * rng.uniform(0.2, 1.0, size=(n_epochs, 1))
        return ProbeResponseDataset.from_arrays(probes, responses)

    return make
