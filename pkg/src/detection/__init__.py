"""
Noisy revealed-preference detectors and probe optimization.
"""
from .detector import (
    REPORT_COLUMNS,
    DetectorOutcome,
    decide,
    detect,
    detection_sweep,
    min_perturbation,
    min_perturbation_probe,
    min_perturbation_response,
    perturbed_feasible,
    run_detection_trial,
    sample_m_probe,
    sample_m_response,
    type_i_lower_bound,
)
from .ecdf import EmpiricalCdf
from .noise import NoiseModel, NoiseTarget, trial_rng, trial_seed
from .spsa import (
    SpsaConfig,
    SpsaResult,
    estimate_type_ii,
    probe_columns,
    quadratic_surrogate,
    rademacher,
    run_probe_optimization,
    spsa_gradient,
    spsa_optimize,
)

__all__ = [
    'REPORT_COLUMNS',
    'DetectorOutcome',
    'EmpiricalCdf',
    'NoiseModel',
    'NoiseTarget',
    'SpsaConfig',
    'SpsaResult',
    'decide',
    'detect',
    'detection_sweep',
    'estimate_type_ii',
    'min_perturbation',
    'min_perturbation_probe',
    'min_perturbation_response',
    'perturbed_feasible',
    'probe_columns',
    'quadratic_surrogate',
    'rademacher',
    'run_detection_trial',
    'run_probe_optimization',
    'sample_m_probe',
    'sample_m_response',
    'spsa_gradient',
    'spsa_optimize',
    'trial_rng',
    'trial_seed',
    'type_i_lower_bound',
]
