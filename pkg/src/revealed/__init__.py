"""
Revealed-preference tests: GARP, Afriat certificates and utility reconstruction.
"""
from .afriat import (
    AfriatSolution,
    GarpVerdict,
    NonlinearBudgetSpec,
    check_garp,
    check_nonlinear_garp,
    cross_cost_matrix,
    cross_costs_from_arrays,
    garp_from_cross_costs,
    nonlinear_cross_costs,
    reconstruct_nonlinear_utility,
    reconstruct_utility,
    revealed_preference_relations,
    solve_afriat,
    solve_afriat_from_cross_costs,
    solve_nonlinear_afriat,
    tie_snapped_costs,
    utility_grid,
)
from .dataset import ProbeResponseDataset, read_dataset_csv, write_dataset_csv
from .simplex import afriat_lp_feasible, phase_one_feasible

__all__ = [
    'AfriatSolution',
    'GarpVerdict',
    'NonlinearBudgetSpec',
    'ProbeResponseDataset',
    'afriat_lp_feasible',
    'check_garp',
    'check_nonlinear_garp',
    'cross_cost_matrix',
    'cross_costs_from_arrays',
    'garp_from_cross_costs',
    'nonlinear_cross_costs',
    'phase_one_feasible',
    'read_dataset_csv',
    'reconstruct_nonlinear_utility',
    'reconstruct_utility',
    'revealed_preference_relations',
    'solve_afriat',
    'solve_afriat_from_cross_costs',
    'solve_nonlinear_afriat',
    'tie_snapped_costs',
    'utility_grid',
]
