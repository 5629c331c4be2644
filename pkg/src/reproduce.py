"""
Acceptance studies: rationality recovery, nonlinear budgets, detector
calibration and probe optimization, each checked against its threshold.
"""
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from .detection import (
    NoiseModel,
    SpsaConfig,
    detection_sweep,
    run_probe_optimization,
    sample_m_response,
    trial_rng,
    trial_seed,
    type_i_lower_bound,
)
from .experiment_config import ExperimentConfig, ReproduceSettings
from .revealed import (
    afriat_lp_feasible,
    check_garp,
    cross_costs_from_arrays,
    garp_from_cross_costs,
    reconstruct_nonlinear_utility,
    reconstruct_utility,
    solve_afriat,
    solve_nonlinear_afriat,
)
from .simulation import (
    RandomCobbDouglasResponder,
    ScenarioConfig,
    UtilitySpec,
    build_responder,
    generate_dataset,
    riccati_budget_spec,
    sample_probes,
)
from .tracking import TrackerParams, WaveformSpec, are_residual, solve_are

logger = logging.getLogger(__name__)

STUDIES = ('linear', 'nonlinear', 'detect', 'spsa')

LINEAR_UTILITIES = {
    'determinant': UtilitySpec(kind='determinant'),
    'trace': UtilitySpec(kind='trace'),
    'cobb-douglas': UtilitySpec.cobb_douglas([0.5, 1.0]),
}
OPTIMALITY_TOL = 1e-9
SEPARATION_GRID = [0.01, 0.05, 0.1, 0.2]
# Monte-Carlo slack when checking that the separation gap does not grow with sigma
SEPARATION_SLACK = 0.02
BOUND_PHIS = [0.0, 0.5, 1.0, 2.0]


def _finite(value: float) -> Optional[float]:
    return float(value) if np.isfinite(value) else None


@dataclass
class Criterion:
    """One acceptance check."""

    id: int
    name: str
    value: Any
    threshold: str
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class StudyResult:
    name: str
    criteria: List[Criterion] = field(default_factory=list)
    runtime_s: float = 0.0
    runtime_limit_s: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'runtime_s': round(self.runtime_s, 3),
            'runtime_limit_s': self.runtime_limit_s,
            'runtime_ok': None if self.runtime_limit_s is None else self.runtime_s < self.runtime_limit_s,
            'criteria': [c.to_dict() for c in self.criteria],
        }


# ---------------------------------------------------------------------------
# Reconstruction optimality
# ---------------------------------------------------------------------------

def linear_optimality_gap(solution, dataset, n_points: int, rng: np.random.Generator) -> float:
    """Largest U(beta) - U(beta_t) over points sampled inside the budget sets."""
    epochs = rng.integers(0, dataset.n_epochs, size=n_points)
    shares = rng.dirichlet(np.ones(dataset.dim), size=n_points) * rng.uniform(0.0, 1.0, size=(n_points, 1))
    spend = np.sum(dataset.probes * dataset.responses, axis=1)
    points = shares * spend[epochs, None] / dataset.probes[epochs]
    own = reconstruct_utility(solution, dataset, dataset.responses)
    return float(np.max(reconstruct_utility(solution, dataset, points) - own[epochs]))


def nonlinear_optimality_gap(solution, dataset, budgets, n_points: int, rng: np.random.Generator) -> float:
    """As linear_optimality_gap, with points rejection-sampled from g_t(beta) <= g_t(beta_t)."""
    own = reconstruct_nonlinear_utility(solution, dataset, budgets, dataset.responses)
    levels = [g(beta) for g, beta in zip(budgets.functions, dataset.responses)]
    gap = -np.inf
    for _ in range(n_points):
        t = int(rng.integers(0, dataset.n_epochs))
        g = budgets.functions[t]
        for _ in range(50):
            beta = dataset.responses[t] * rng.uniform(0.05, 1.5, size=dataset.dim)
            if g(beta) <= levels[t]:
                value = reconstruct_nonlinear_utility(solution, dataset, budgets, beta)
                gap = max(gap, float(value - own[t]))
                break
    return gap


# ---------------------------------------------------------------------------
# Studies
# ---------------------------------------------------------------------------

def linear_study(settings: ReproduceSettings, seed: int) -> StudyResult:
    result = StudyResult('linear', runtime_limit_s=10.0)
    n = settings.linear_seeds

    feasible, worst_gap = {}, -np.inf
    for u, (label, utility) in enumerate(LINEAR_UTILITIES.items()):
        cfg = ScenarioConfig(scenario='linear-waveform', utility=utility)
        count = 0
        for k in range(n):
            dataset = generate_dataset(cfg, trial_rng(seed, 1, u, k))
            solution = solve_afriat(dataset)
            if solution is not None:
                count += 1
                worst_gap = max(worst_gap, linear_optimality_gap(
                    solution, dataset, settings.optimality_points, trial_rng(seed, 1, u, k, 1)
                ))
        feasible[label] = count

    random_cfg = ScenarioConfig(scenario='linear-waveform', responder='uniform-simplex')
    random_fail = sum(
        not check_garp(generate_dataset(random_cfg, trial_rng(seed, 2, k))).consistent for k in range(n)
    )

    disagreements = 0
    for k in range(settings.oracle_datasets):
        rng = trial_rng(seed, 3, k)
        n_epochs, m = int(rng.integers(2, 7)), int(rng.integers(2, 4))
        probes = rng.uniform(0.1, 1.1, size=(n_epochs, m))
        responses = RandomCobbDouglasResponder().respond(probes, rng)
        a = cross_costs_from_arrays(probes, responses)
        disagreements += garp_from_cross_costs(a).consistent != afriat_lp_feasible(a)

    result.criteria += [
        Criterion(1, 'cognitive datasets rationalizable', feasible, f'{n}/{n} per utility',
                  all(c == n for c in feasible.values())),
        Criterion(1, 'random responder fails GARP', random_fail, f'>= {int(np.ceil(0.9 * n))}/{n}',
                  random_fail >= 0.9 * n),
        Criterion(3, 'reconstructed utility peaks at the response (linear)', _finite(worst_gap),
                  f'<= {OPTIMALITY_TOL:g}', bool(worst_gap <= OPTIMALITY_TOL)),
        Criterion(4, 'GARP verdict matches LP feasibility', disagreements, '0 disagreements',
                  disagreements == 0),
    ]
    return result


def nonlinear_study(settings: ReproduceSettings, seed: int) -> StudyResult:
    result = StudyResult('nonlinear', runtime_limit_s=60.0)
    cfg = ScenarioConfig(scenario='nonlinear-waveform', n_epochs=settings.nonlinear_epochs)

    feasible, worst_residual, worst_gap = 0, 0.0, -np.inf
    for k in range(settings.nonlinear_seeds):
        dataset = generate_dataset(cfg, trial_rng(seed, 5, k))
        budgets = riccati_budget_spec(dataset, cfg.A, cfg.C, cfg.lambda_bar, cfg.upper)
        for t, budget in enumerate(budgets.functions):
            beta = dataset.responses[t]
            residual = are_residual(budget.params(beta), budget.steady_state(beta))
            worst_residual = max(worst_residual, float(np.max(np.abs(residual))))
        solution = solve_nonlinear_afriat(dataset, budgets)
        if solution is not None:
            feasible += 1
            worst_gap = max(worst_gap, nonlinear_optimality_gap(
                solution, dataset, budgets, settings.nonlinear_optimality_points, trial_rng(seed, 5, k, 1)
            ))
        logger.info(f"Nonlinear run {k + 1}/{settings.nonlinear_seeds}: feasible={solution is not None}")

    grid = [0.1, 0.5, 1.0, 2.0, 5.0]
    are_error = 0.0
    for q in grid:
        for r in grid:
            params = TrackerParams(A=[[1.0]], C=[[1.0]], Q=[[q]], R=[[r]])
            exact = (q + np.sqrt(q * q + 4.0 * q * r)) / 2.0
            are_error = max(are_error, abs(float(solve_are(params, tol=1e-13)[0, 0]) - exact))

    det_spread = 0.0
    for family in ('triangular-cw', 'gaussian-cw'):
        dets = [np.linalg.det(WaveformSpec(family=family, lam=lam).covariance()) for lam in (1e-6, 1e-5, 1e-4)]
        det_spread = max(det_spread, (max(dets) - min(dets)) / abs(dets[0]))
    chirp = WaveformSpec(family='gaussian-lfm-chirp', lam=1e-5, b=0.0).covariance()
    gaussian = WaveformSpec(family='gaussian-cw', lam=1e-5).covariance()

    n = settings.nonlinear_seeds
    result.criteria += [
        Criterion(2, 'nonlinear datasets rationalizable', feasible, f'{n}/{n}', feasible == n),
        Criterion(2, 'ARE residual at every epoch', worst_residual, '<= 1e-10', worst_residual <= 1e-10),
        Criterion(3, 'reconstructed utility peaks at the response (nonlinear)', _finite(worst_gap),
                  f'<= {OPTIMALITY_TOL:g}', bool(worst_gap <= OPTIMALITY_TOL)),
        Criterion(5, 'scalar ARE closed form', are_error, '<= 1e-8', are_error <= 1e-8),
        Criterion(10, 'det R independent of lambda (CW)', det_spread, '<= 1e-12 relative', det_spread <= 1e-12),
        Criterion(10, 'chirp at b = 0 equals Gaussian CW', bool(np.array_equal(chirp, gaussian)), 'exact',
                  bool(np.array_equal(chirp, gaussian))),
    ]
    return result


def detect_study(settings: ReproduceSettings, seed: int, out_dir: Optional[Path] = None) -> StudyResult:
    result = StudyResult('detect', runtime_limit_s=300.0)
    beam = ScenarioConfig(scenario='beam')
    cognitive = build_responder(beam)
    random = build_responder(beam.model_copy(update={'responder': 'uniform-simplex'}))

    type_i = detection_sweep(
        beam, cognitive, [0.05], 'response', 0.05, settings.type_i_trials, settings.n_samples,
        trial_seed(seed, 6),
    )
    false_alarm = float((type_i['decision'] == 'H1').mean())

    sweeps = []
    for label, responder, key in (('cognitive', cognitive, 7), ('non-cognitive', random, 8)):
        frame = detection_sweep(
            beam, responder, SEPARATION_GRID, 'response', 0.05, settings.separation_trials,
            settings.n_samples, trial_seed(seed, key),
        )
        sweeps.append(frame.assign(responder=label))
    sweep = pd.concat(sweeps, ignore_index=True)
    means = sweep.groupby(['sigma', 'responder'])['statistic'].mean().unstack()
    gaps = (means['cognitive'] - means['non-cognitive']).reindex(SEPARATION_GRID)
    monotone = bool(np.all(np.diff(gaps.to_numpy()) <= SEPARATION_SLACK))

    bound_misses, bound_rows = 0, []
    for c, n_epochs in enumerate((2, 5, 10)):
        cfg = ScenarioConfig(scenario='linear-waveform', n_epochs=n_epochs)
        probes = sample_probes(cfg, trial_rng(seed, 9, c))
        cdf = sample_m_response(probes, NoiseModel(sigma=1.0), settings.bound_trials, trial_rng(seed, 9, c, 1))
        for phi in BOUND_PHIS:
            tail = cdf.upper_tail(phi)
            se = np.sqrt(max(tail * (1.0 - tail), 1e-12) / len(cdf))
            bound = type_i_lower_bound(phi, probes)
            bound_misses += tail < bound - 3.0 * se
            bound_rows.append({'n_epochs': n_epochs, 'phi': phi, 'false_alarm': tail, 'bound': bound})

    if out_dir is not None:
        sweep.to_csv(out_dir / 'separation_sweep.csv', index=False, lineterminator='\n')
        pd.DataFrame({'sigma': gaps.index, 'gap': gaps.to_numpy()}).to_csv(
            out_dir / 'separation_gap.csv', index=False, lineterminator='\n'
        )
        pd.DataFrame(bound_rows).to_csv(out_dir / 'type_i_bound.csv', index=False, lineterminator='\n')

    result.criteria += [
        Criterion(6, 'false-alarm rate of the cognitive beam radar', false_alarm, '<= 0.07', false_alarm <= 0.07),
        Criterion(7, 'separation at the lowest noise', float(gaps.iloc[0]), '>= 0.5', float(gaps.iloc[0]) >= 0.5),
        Criterion(7, 'separation gap nonincreasing in sigma', [float(g) for g in gaps], 'nonincreasing',
                  monotone),
        Criterion(8, 'false-alarm rate above the Gaussian lower bound', bound_misses,
                  '0 misses beyond 3 standard errors', bound_misses == 0),
    ]
    return result


def spsa_study(
    config: ExperimentConfig, settings: ReproduceSettings, seed: int, out_dir: Optional[Path] = None
) -> StudyResult:
    result = StudyResult('spsa', runtime_limit_s=1800.0)
    spsa = config.spsa
    responder = build_responder(spsa.scenario.model_copy(update={'responder': spsa.responder}))
    noise = NoiseModel(sigma=spsa.sigma)

    initial, final = [], []
    for k in range(settings.spsa_seeds):
        cfg = SpsaConfig(
            iterations=settings.spsa_iterations,
            trials=settings.spsa_trials,
            gamma=spsa.gamma,
            omega=spsa.omega,
            mu=spsa.mu,
            mu_exponent=spsa.mu_exponent,
            n_samples=settings.n_samples,
            common_random_numbers=spsa.common_random_numbers,
            resample_cap=spsa.resample_cap,
            seed=trial_seed(seed, 10, k),
        )
        run = run_probe_optimization(spsa.scenario, responder, noise, cfg)
        initial.append(float(run.trajectory['J_hat'].iloc[0]))
        final.append(float(run.trajectory['J_hat'].iloc[-1]))
        if out_dir is not None:
            run.trajectory.to_csv(
                out_dir / f'spsa_trajectory_{k + 1}.csv', index=False, float_format='%.17g', lineterminator='\n'
            )

    start, end = float(np.median(initial)), float(np.median(final))
    result.criteria += [
        Criterion(9, 'median initial Type-II estimate', start, '>= 0.9', start >= 0.9),
        Criterion(9, 'median final Type-II estimate', end, '<= 0.35', end <= 0.35),
        Criterion(9, 'descent', {'initial': start, 'final': end}, 'final < initial', end < start),
    ]
    return result


def run_reproduce(
    config: ExperimentConfig, study: str, out_dir: Path, quick: bool = False
) -> Dict[str, Any]:
    """Run one study (or ``all``) and return the summary written to summary.json."""
    settings = config.reproduce.quick() if quick else config.reproduce
    runners: Dict[str, Callable[[], StudyResult]] = {
        'linear': lambda: linear_study(settings, config.seed),
        'nonlinear': lambda: nonlinear_study(settings, config.seed),
        'detect': lambda: detect_study(settings, config.seed, out_dir),
        'spsa': lambda: spsa_study(config, settings, config.seed, out_dir),
    }
    names = STUDIES if study == 'all' else (study,)

    studies = {}
    for name in names:
        logger.info(f"Running {name} study{' (quick)' if quick else ''}")
        start = time.perf_counter()
        outcome = runners[name]()
        outcome.runtime_s = time.perf_counter() - start
        studies[name] = outcome
        logger.info(f"{name} study {'passed' if outcome.passed else 'FAILED'} in {outcome.runtime_s:.1f}s")

    return {
        'study': study,
        'quick': quick,
        'seed': config.seed,
        'passed': all(s.passed for s in studies.values()),
        'studies': {name: s.to_dict() for name, s in studies.items()},
    }
