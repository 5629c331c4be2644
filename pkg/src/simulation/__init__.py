"""
Simulated cognitive and non-cognitive radars.
"""
from .beam import BeamConfig, beam_allocate, default_target, precision_trace, predicted_precision_probe
from .budgets import RiccatiBudget, maximize_nonlinear_budget, riccati_budget_spec
from .responders import (
    CognitiveResponder,
    NonlinearCognitiveResponder,
    RandomCobbDouglasResponder,
    Responder,
    UniformSimplexResponder,
    make_responder,
    random_exponents,
    random_responder,
)
from .scenarios import ScenarioConfig, build_responder, generate_dataset, sample_probes
from .utilities import UtilitySpec, maximize_linear_budget, maximize_linear_budget_numeric

__all__ = [
    'BeamConfig',
    'CognitiveResponder',
    'NonlinearCognitiveResponder',
    'RandomCobbDouglasResponder',
    'Responder',
    'RiccatiBudget',
    'ScenarioConfig',
    'UniformSimplexResponder',
    'UtilitySpec',
    'beam_allocate',
    'build_responder',
    'default_target',
    'generate_dataset',
    'make_responder',
    'maximize_linear_budget',
    'maximize_linear_budget_numeric',
    'maximize_nonlinear_budget',
    'precision_trace',
    'predicted_precision_probe',
    'random_exponents',
    'random_responder',
    'riccati_budget_spec',
    'sample_probes',
]
