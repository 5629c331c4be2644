"""
Kalman tracking, Riccati/Lyapunov solvers, eigenvalue routines and waveform maps.
"""
from .eigen import jacobi_eigenvalues, lambda_max
from .kalman import (
    KalmanState,
    TrackerParams,
    are_residual,
    kalman_step,
    loewner_leq,
    riccati_iterates,
    riccati_map,
    solve_are,
    solve_lyapunov,
    target_transition,
)
from .waveforms import WaveformSpec, covariance_from_spectrum, obs_noise_cov, waveform_response

__all__ = [
    'KalmanState',
    'TrackerParams',
    'WaveformSpec',
    'are_residual',
    'covariance_from_spectrum',
    'jacobi_eigenvalues',
    'kalman_step',
    'lambda_max',
    'loewner_leq',
    'obs_noise_cov',
    'riccati_iterates',
    'riccati_map',
    'solve_are',
    'solve_lyapunov',
    'target_transition',
    'waveform_response',
]
