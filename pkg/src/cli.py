"""
Command-line interface: simulate, test, detect, spsa and reproduce.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 acceptance threshold missed (reproduce).
"""
import argparse
import json
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from . import __version__
from .config import Config
from .database import DatabaseManager
from .detection import NoiseModel, SpsaConfig, detection_sweep, run_probe_optimization
from .exceptions import CognitiveRadarError, ConfigError, DatasetError
from .experiment_config import ExperimentConfig, load_experiment_config
from .reproduce import STUDIES, run_reproduce
from .revealed import (
    check_garp,
    check_nonlinear_garp,
    read_dataset_csv,
    solve_afriat,
    solve_nonlinear_afriat,
    utility_grid,
    write_dataset_csv,
)
from .simulation import build_responder, generate_dataset, riccati_budget_spec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_ACCEPTANCE = 4


class AcceptanceMiss(Exception):
    """A reproduce run finished but missed at least one threshold."""


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def write_json(data: Dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, default=_json_default) + '\n', encoding='utf-8')
    return path


def write_manifest(out_dir: Path, command: str, config: ExperimentConfig) -> Path:
    """manifest.json: command, seed, config hash, version and UTC timestamp."""
    return write_json({
        'command': command,
        'seed': config.seed,
        'config_hash': config.config_hash(),
        'version': __version__,
        'timestamp': datetime.now(timezone.utc).isoformat(),
    }, out_dir / 'manifest.json')


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_simulate(config: ExperimentConfig, args: argparse.Namespace) -> Dict[str, Any]:
    scenario = config.simulate.model_copy(update={'seed': config.seed})
    dataset = generate_dataset(scenario)
    out_dir = Path(config.out)
    path = write_dataset_csv(dataset, out_dir / 'dataset.csv')
    logger.info(f"Simulated {scenario.scenario} ({scenario.responder}): {dataset.n_epochs} epochs")
    return {'dataset': str(path), 'n_epochs': dataset.n_epochs, 'dim': dataset.dim}


def cmd_test(config: ExperimentConfig, args: argparse.Namespace) -> Dict[str, Any]:
    settings = config.test
    source = args.dataset or settings.dataset
    if source is None:
        raise ConfigError("no dataset to test", ["command line: test.dataset: give a dataset path"])
    try:
        dataset = read_dataset_csv(source)
    except DatasetError as e:
        raise ConfigError(f"invalid dataset {source}", [f"command line: test.dataset: {e}"]) from e

    budgets = None
    if settings.budget == 'riccati':
        budgets = riccati_budget_spec(dataset, settings.A, settings.C, settings.lambda_bar, settings.upper)
        verdict = check_nonlinear_garp(dataset, budgets, settings.tol)
        solution = solve_nonlinear_afriat(dataset, budgets, settings.tol) if verdict.consistent else None
    else:
        verdict = check_garp(dataset, settings.tol)
        solution = solve_afriat(dataset, settings.tol) if verdict.consistent else None

    report: Dict[str, Any] = {
        'dataset': str(source),
        'budget': settings.budget,
        'n_epochs': dataset.n_epochs,
        'dim': dataset.dim,
        'consistent': verdict.consistent,
    }
    if solution is not None:
        report.update(solution.to_dict())
    else:
        report['violating_cycle'] = [t + 1 for t in verdict.violating_cycle]

    out_dir = Path(config.out)
    write_json(report, out_dir / 'verdict.json')
    if solution is not None and dataset.dim == 2:
        high = settings.grid_high or 1.25 * float(np.max(dataset.responses))
        axis = np.linspace(settings.grid_low, high, settings.grid_points)
        grid = utility_grid(solution, dataset, axis, axis, budgets)
        grid.to_csv(out_dir / 'utility_grid.csv', index=False, float_format='%.17g', lineterminator='\n')
    logger.info(f"{source}: consistent={verdict.consistent}")
    return report


def cmd_detect(config: ExperimentConfig, args: argparse.Namespace) -> Dict[str, Any]:
    settings = config.detect
    responder = build_responder(settings.scenario)
    report = detection_sweep(
        settings.scenario, responder, settings.sigma_grid, settings.target, settings.gamma,
        settings.trials, settings.n_samples, config.seed,
    )
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report.to_csv(out_dir / 'detect_report.csv', index=False, float_format='%.17g', lineterminator='\n')

    by_sigma = report.groupby('sigma')
    return {
        'rows': len(report),
        'responder': settings.scenario.responder,
        'mean_statistic': by_sigma['statistic'].mean().to_dict(),
        'h0_rate': by_sigma['decision'].apply(lambda d: float((d == 'H0').mean())).to_dict(),
    }


def cmd_spsa(config: ExperimentConfig, args: argparse.Namespace) -> Dict[str, Any]:
    settings = config.spsa
    cfg = SpsaConfig(
        **settings.model_dump(exclude={'scenario', 'responder', 'sigma'}),
        seed=config.seed,
    )
    responder = build_responder(settings.scenario.model_copy(update={'responder': settings.responder}))
    result = run_probe_optimization(settings.scenario, responder, NoiseModel(sigma=settings.sigma), cfg)

    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    result.trajectory.to_csv(
        out_dir / 'spsa_trajectory.csv', index=False, float_format='%.17g', lineterminator='\n'
    )
    return {
        'iterations': len(result.trajectory),
        'evaluations': result.evaluations,
        'initial_J_hat': float(result.trajectory['J_hat'].iloc[0]),
        'final_J_hat': float(result.trajectory['J_hat'].iloc[-1]),
    }


def cmd_reproduce(config: ExperimentConfig, args: argparse.Namespace) -> Dict[str, Any]:
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = run_reproduce(config, args.study, out_dir, quick=args.quick)
    write_json(summary, out_dir / 'summary.json')
    if not summary['passed'] and not args.quick:
        raise AcceptanceMiss(f"reproduce {args.study}: acceptance thresholds missed")
    return {'passed': summary['passed'], 'quick': args.quick}


COMMANDS = {
    'simulate': cmd_simulate,
    'test': cmd_test,
    'detect': cmd_detect,
    'spsa': cmd_spsa,
    'reproduce': cmd_reproduce,
}


# ---------------------------------------------------------------------------
# Parsing and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, help='JSON experiment config')
    common.add_argument('--seed', type=int, help='root seed (u64)')
    common.add_argument('--out', help='output directory')
    common.add_argument('--record', action='store_true', help='record the run in the run ledger')
    common.add_argument('--database-url', help=f'run ledger database (default {Config.DATABASE_URL})')
    level = common.add_mutually_exclusive_group()
    level.add_argument('--verbose', '-v', action='store_true', help='debug logging')
    level.add_argument('--quiet', '-q', action='store_true', help='warnings and errors only')

    scenario = argparse.ArgumentParser(add_help=False)
    scenario.add_argument('--scenario', help='linear-waveform, nonlinear-waveform or beam')

    gamma = argparse.ArgumentParser(add_help=False)
    gamma.add_argument('--gamma', type=float, help='significance level')

    parser = argparse.ArgumentParser(
        prog='cogradar',
        description='Revealed-preference detection of cognitive radars',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('simulate', parents=[common, scenario], help='simulate a probe/response dataset')
    test = sub.add_parser('test', parents=[common], help='GARP/Afriat test of a dataset CSV')
    test.add_argument('dataset', nargs='?', help='dataset CSV (overrides test.dataset)')
    test.add_argument('--budget', choices=['linear', 'riccati'], help='budget family')
    detect = sub.add_parser('detect', parents=[common, scenario, gamma], help='detector noise sweep')
    detect.add_argument('--sigma-grid', type=_float_list, help='comma-separated noise levels')
    detect.add_argument('--target', choices=['response', 'probe'], help='which side carries the noise')
    sub.add_parser('spsa', parents=[common, scenario, gamma], help='optimize the probe record')
    reproduce = sub.add_parser('reproduce', parents=[common], help='run the acceptance studies')
    reproduce.add_argument('study', choices=[*STUDIES, 'all'])
    reproduce.add_argument('--quick', action='store_true', help='small smoke-run sizes')
    return parser


def cli_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Nested config overrides from command-line flags."""
    overrides: Dict[str, Any] = {}
    if args.seed is not None:
        overrides['seed'] = args.seed
    if args.out is not None:
        overrides['out'] = args.out

    section: Dict[str, Any] = {}
    scenario = getattr(args, 'scenario', None)
    if args.command == 'simulate' and scenario is not None:
        section['scenario'] = scenario
    elif args.command in ('detect', 'spsa') and scenario is not None:
        section['scenario'] = {'scenario': scenario}
    if getattr(args, 'gamma', None) is not None:
        section['gamma'] = args.gamma
    if getattr(args, 'sigma_grid', None) is not None:
        section['sigma_grid'] = args.sigma_grid
    if getattr(args, 'target', None) is not None:
        section['target'] = args.target
    if getattr(args, 'budget', None) is not None:
        section['budget'] = args.budget
    if section:
        overrides[args.command] = section
    return overrides


def configure_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else Config.LOG_LEVEL
    logging.basicConfig(level=level, format=Config.LOG_FORMAT, force=True)


def _record(args, config: Optional[ExperimentConfig], status: str, summary, elapsed: float, error=None):
    if not args.record or config is None:
        return
    try:
        db = DatabaseManager(args.database_url)
        db.create_tables()
        db.log_run(
            command=args.command,
            seed=config.seed,
            config_hash=config.config_hash(),
            config=config.model_dump(mode='json'),
            status=status,
            summary=json.loads(json.dumps(summary, default=_json_default)) if summary else None,
            execution_time=elapsed,
            error_message=error,
        )
    except Exception as e:
        logger.error(f"Could not record run: {e}")


def _validate_environment():
    try:
        Config.validate()
    except ValueError as e:
        raise ConfigError("invalid environment configuration", [f"environment: {e}"]) from e


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    config = None
    start = time.perf_counter()
    try:
        _validate_environment()
        config = load_experiment_config(args.config, cli_overrides(args))
        summary = COMMANDS[args.command](config, args)
        write_manifest(Path(config.out), args.command, config)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        print(str(e), file=sys.stderr)
        return EXIT_CONFIG
    except AcceptanceMiss as e:
        logger.error(str(e))
        write_manifest(Path(config.out), args.command, config)
        _record(args, config, 'failed', None, time.perf_counter() - start, str(e))
        return EXIT_ACCEPTANCE
    except (CognitiveRadarError, np.linalg.LinAlgError) as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        _record(args, config, 'error', None, time.perf_counter() - start, f"{type(e).__name__}: {e}")
        return EXIT_NUMERIC

    _record(args, config, 'success', summary, time.perf_counter() - start)
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
