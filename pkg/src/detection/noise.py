"""
Measurement-noise models and per-trial seed splitting.
"""
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

NoiseTarget = Literal['response', 'probe']


class NoiseModel(BaseModel):
    """Zero-mean Gaussian noise, i.i.d. across epochs and coordinates."""

    model_config = ConfigDict(extra='forbid', frozen=True)

    kind: Literal['gaussian'] = 'gaussian'
    sigma: float = Field(default=0.0, ge=0)

    def sample(self, shape, rng: np.random.Generator) -> np.ndarray:
        if self.sigma == 0.0:
            return np.zeros(shape)
        return self.sigma * rng.standard_normal(shape)


def trial_seed(root_seed: int, *key: int) -> int:
    """Seed of the stream addressed by ``key``: SeedSequence(root, spawn_key=key).

    Monte-Carlo trial i uses key (i,), so results do not depend on execution order.
    """
    sequence = np.random.SeedSequence(root_seed, spawn_key=tuple(key))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def trial_rng(root_seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(trial_seed(root_seed, *key))
