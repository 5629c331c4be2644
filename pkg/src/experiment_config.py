"""
Experiment configuration files.

An experiment config is a JSON document with one optional section per CLI
command. Unknown keys are rejected; validation failures are reported as
``line N: path.to.key: message``.
"""
import hashlib
import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .config import Config
from .exceptions import ConfigError
from .simulation.scenarios import ResponderKind, ScenarioConfig

logger = logging.getLogger(__name__)

U64_MAX = 2 ** 64 - 1


class RevealedTestSettings(BaseModel):
    """``test``: revealed-preference test of a dataset CSV."""

    model_config = ConfigDict(extra='forbid')

    dataset: Optional[str] = None
    budget: Literal['linear', 'riccati'] = 'linear'
    A: List[List[float]] = [[1.0, 1.0], [0.0, 1.0]]
    C: List[List[float]] = [[1.0, 0.0], [0.0, 1.0]]
    lambda_bar: float = Field(default=3.6, gt=0)
    upper: List[float] = [10.0, 10.0]
    tol: float = Field(default=Config.GARP_TOL, gt=0)
    # contour grid for m = 2; the upper edge defaults to 1.25 x the largest response
    grid_low: float = Field(default=0.0, ge=0)
    grid_high: Optional[float] = Field(default=None, gt=0)
    grid_points: int = Field(default=41, ge=2)


class DetectSettings(BaseModel):
    """``detect``: detector statistics over a noise grid."""

    model_config = ConfigDict(extra='forbid')

    scenario: ScenarioConfig = Field(default_factory=lambda: ScenarioConfig(scenario='beam'))
    target: Literal['response', 'probe'] = 'response'
    sigma_grid: List[float] = [0.01, 0.05, 0.1, 0.2]
    gamma: float = Field(default=0.05, gt=0, lt=1)
    trials: int = Field(default=100, ge=1)
    n_samples: int = Field(default=Config.MC_SAMPLES, ge=1)
    save_cdf: bool = False

    @field_validator('sigma_grid')
    @classmethod
    def _check_grid(cls, grid: List[float]) -> List[float]:
        if not grid:
            raise ValueError("sigma_grid must not be empty")
        if any(sigma < 0 for sigma in grid):
            raise ValueError("sigma values must be nonnegative")
        return grid


class SpsaSettings(BaseModel):
    """``spsa``: probe optimization against a non-cognitive radar."""

    model_config = ConfigDict(extra='forbid')

    scenario: ScenarioConfig = Field(default_factory=lambda: ScenarioConfig(scenario='beam'))
    responder: ResponderKind = 'random-cobb-douglas'
    sigma: float = Field(default=0.1, ge=0)
    iterations: int = Field(default=200, ge=1)
    trials: int = Field(default=100, ge=1)
    gamma: float = Field(default=0.05, gt=0, lt=1)
    omega: float = Field(default=0.005, gt=0)
    mu: float = Field(default=0.005, ge=0)
    mu_exponent: float = Field(default=1.0, ge=0)
    n_samples: int = Field(default=Config.MC_SAMPLES, ge=1)
    common_random_numbers: bool = True
    resample_cap: int = Field(default=Config.RESAMPLE_CAP, ge=1)

    @field_validator('responder')
    @classmethod
    def _non_cognitive(cls, kind: str) -> str:
        if kind == 'cognitive':
            raise ValueError("the probe optimizer needs a non-cognitive responder")
        return kind


class ReproduceSettings(BaseModel):
    """``reproduce``: sizes of the acceptance studies (full and quick runs)."""

    model_config = ConfigDict(extra='forbid')

    linear_seeds: int = Field(default=100, ge=1)
    nonlinear_seeds: int = Field(default=100, ge=1)
    nonlinear_epochs: int = Field(default=50, ge=2)
    optimality_points: int = Field(default=2000, ge=1)
    nonlinear_optimality_points: int = Field(default=2000, ge=1)
    oracle_datasets: int = Field(default=500, ge=1)
    type_i_trials: int = Field(default=1000, ge=1)
    separation_trials: int = Field(default=100, ge=1)
    bound_trials: int = Field(default=1000, ge=1)
    spsa_seeds: int = Field(default=5, ge=1)
    spsa_iterations: int = Field(default=200, ge=1)
    spsa_trials: int = Field(default=100, ge=1)
    n_samples: int = Field(default=Config.MC_SAMPLES, ge=1)

    def quick(self) -> 'ReproduceSettings':
        """Smoke-run sizes."""
        return self.model_copy(update={
            'linear_seeds': min(self.linear_seeds, 5),
            'nonlinear_seeds': min(self.nonlinear_seeds, 1),
            'nonlinear_epochs': min(self.nonlinear_epochs, 4),
            'optimality_points': min(self.optimality_points, 200),
            'nonlinear_optimality_points': min(self.nonlinear_optimality_points, 10),
            'oracle_datasets': min(self.oracle_datasets, 50),
            'type_i_trials': min(self.type_i_trials, 50),
            'separation_trials': min(self.separation_trials, 20),
            'bound_trials': min(self.bound_trials, 100),
            'spsa_seeds': 1,
            'spsa_iterations': min(self.spsa_iterations, 3),
            'spsa_trials': min(self.spsa_trials, 10),
            'n_samples': min(self.n_samples, 200),
        })


class ExperimentConfig(BaseModel):
    """Root of an experiment config file."""

    model_config = ConfigDict(extra='forbid')

    seed: int = Field(default=Config.DEFAULT_SEED, ge=0, le=U64_MAX)
    out: str = Config.OUTPUT_DIR
    simulate: ScenarioConfig = Field(default_factory=ScenarioConfig)
    test: RevealedTestSettings = Field(default_factory=RevealedTestSettings)
    detect: DetectSettings = Field(default_factory=DetectSettings)
    spsa: SpsaSettings = Field(default_factory=SpsaSettings)
    reproduce: ReproduceSettings = Field(default_factory=ReproduceSettings)

    def config_hash(self) -> str:
        """sha256 of the canonical JSON form."""
        canonical = json.dumps(self.model_dump(mode='json'), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _key_paths(data: Any, prefix=()) -> set:
    paths = set()
    if isinstance(data, dict):
        for key, value in data.items():
            paths.add(prefix + (key,))
            paths |= _key_paths(value, prefix + (key,))
    return paths


def locate_key(text: str, loc) -> Optional[int]:
    """1-based line of the first occurrence of the deepest named key in ``loc``."""
    for part in reversed([p for p in loc if isinstance(p, str)]):
        match = re.search(r'"' + re.escape(part) + r'"\s*:', text)
        if match:
            return text.count('\n', 0, match.start()) + 1
    return None


def format_validation_errors(
    error: ValidationError, text: str, file_keys: set, override_keys: frozenset = frozenset()
) -> List[str]:
    details = []
    for item in error.errors():
        loc = tuple(item['loc'])
        path = '.'.join(str(p) for p in loc) or '<root>'
        named = tuple(p for p in loc if isinstance(p, str))
        from_file = named not in override_keys and any(
            named[:i] in file_keys for i in range(len(named), 0, -1)
        )
        line = locate_key(text, loc) if from_file else None
        where = f"line {line}" if line is not None else "command line"
        details.append(f"{where}: {path}: {item['msg']}")
    return details


def load_experiment_config(
    path: Optional[Union[str, Path]] = None, overrides: Optional[Dict[str, Any]] = None
) -> ExperimentConfig:
    """Read and validate an experiment config, applying CLI overrides on top.

    Raises:
        ConfigError: unreadable file, JSON syntax error or schema violation.
    """
    text, raw = '', {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding='utf-8')
        except OSError as e:
            logger.error(f"Error reading config {path}: {e}")
            raise ConfigError(f"cannot read config {path}: {e}") from e
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON in {path}", [f"line {e.lineno}: <document>: {e.msg}"]) from e
        if not isinstance(raw, dict):
            raise ConfigError(f"invalid config {path}", ["line 1: <root>: expected a JSON object"])

    merged = _merge(raw, overrides or {})
    try:
        config = ExperimentConfig.model_validate(merged)
    except ValidationError as e:
        details = format_validation_errors(
            e, text, _key_paths(raw), frozenset(_key_paths(overrides or {}))
        )
        logger.error(f"Config validation failed with {len(details)} error(s)")
        raise ConfigError(f"invalid config {path or '<defaults>'}", details) from e
    return config


def config_schema() -> Dict[str, Any]:
    """Published JSON schema of the config file."""
    return ExperimentConfig.model_json_schema()
