"""
Closed-form observation-noise covariances for three radar waveform families.
"""
import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)

WaveformFamily = Literal['triangular-cw', 'gaussian-cw', 'gaussian-lfm-chirp']


class WaveformSpec(BaseModel):
    """Waveform family and parameters (SI units).

    ``lambda`` is the pulse-width parameter (lambda_1 for the chirp) and ``b``
    the chirp rate; ``b`` is ignored by the continuous-wave families.
    """

    model_config = ConfigDict(extra='forbid', frozen=True, populate_by_name=True)

    family: WaveformFamily
    lam: float = Field(alias='lambda', gt=0)
    b: float = 0.0
    c: float = Field(default=3e8, gt=0)
    fc: float = Field(default=1e9, gt=0)
    eta: float = Field(default=1.0, gt=0)

    def covariance(self) -> np.ndarray:
        return obs_noise_cov(self)

    def eigenvalues(self) -> np.ndarray:
        """Spectrum of R, ascending."""
        return np.linalg.eigvalsh(self.covariance())


def obs_noise_cov(spec: WaveformSpec) -> np.ndarray:
    """Observation-noise covariance R for range (entry 1,1) and Doppler (entry 2,2)."""
    c2, lam2 = spec.c ** 2, spec.lam ** 2
    if spec.family == 'triangular-cw':
        return np.diag([
            c2 * lam2 / (12.0 * spec.eta),
            5.0 * c2 / (2.0 * spec.fc ** 2 * lam2 * spec.eta),
        ])

    range_var = c2 * lam2 / (2.0 * spec.eta)
    doppler_var = c2 / (2.0 * spec.fc ** 2 * lam2 * spec.eta)
    if spec.family == 'gaussian-cw':
        return np.diag([range_var, doppler_var])

    cross = -c2 * spec.b * lam2 / (spec.fc * spec.eta)
    doppler_var = doppler_var + 2.0 * c2 * spec.b ** 2 * lam2 / (spec.fc ** 2 * spec.eta)
    return np.array([[range_var, cross], [cross, doppler_var]])


def waveform_response(spec: WaveformSpec) -> np.ndarray:
    """Response vector (eigenvalues of R) produced by a physical waveform."""
    return spec.eigenvalues()


def covariance_from_spectrum(beta) -> np.ndarray:
    """Observation-noise covariance with the requested eigenvalues, diag(beta)."""
    beta = np.asarray(beta, dtype=float)
    if np.any(beta <= 0):
        raise ValueError("covariance spectrum must be strictly positive")
    return np.diag(beta)
