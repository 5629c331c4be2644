"""
Probe/response datasets and their CSV representation.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ..exceptions import DatasetError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


@dataclass(frozen=True)
class ProbeResponseDataset:
    """Paired probe/response record, one row per epoch.

    Attributes:
        probes: (N, m) array of strictly positive probes alpha_n.
        responses: (N, m) array of responses beta_n. Clean responses are
            nonnegative; noisy measurements may dip below zero, which is
            allowed with ``allow_negative=True``.
    """

    probes: np.ndarray
    responses: np.ndarray

    @classmethod
    def from_arrays(cls, probes, responses, allow_negative: bool = False) -> 'ProbeResponseDataset':
        """Build and validate a dataset from array-likes."""
        probes = np.atleast_2d(np.asarray(probes, dtype=float))
        responses = np.atleast_2d(np.asarray(responses, dtype=float))

        if probes.ndim != 2 or responses.ndim != 2:
            raise DatasetError("probes and responses must be 2-d (epochs x dimension)")
        if probes.shape != responses.shape:
            raise DatasetError(
                f"dimension mismatch: probes {probes.shape} vs responses {responses.shape}"
            )
        if probes.shape[0] < 1 or probes.shape[1] < 1:
            raise DatasetError("dataset needs at least one epoch and one dimension")
        if not (np.all(np.isfinite(probes)) and np.all(np.isfinite(responses))):
            raise DatasetError("dataset contains non-finite values")
        if np.any(probes <= 0):
            raise DatasetError("probe entries must be strictly positive")
        if not allow_negative and np.any(responses < 0):
            raise DatasetError("response entries must be nonnegative")

        return cls(probes=probes, responses=responses)

    @property
    def n_epochs(self) -> int:
        return self.probes.shape[0]

    @property
    def dim(self) -> int:
        return self.probes.shape[1]

    def scaled(self, factor: float) -> 'ProbeResponseDataset':
        """Return a copy with every probe multiplied by ``factor`` > 0."""
        if factor <= 0:
            raise DatasetError("probe scale factor must be positive")
        return ProbeResponseDataset(probes=self.probes * factor, responses=self.responses.copy())

    def to_frame(self) -> pd.DataFrame:
        """Tabular form with header ``epoch, alpha_1..alpha_m, beta_1..beta_m``."""
        columns = {'epoch': np.arange(1, self.n_epochs + 1)}
        for i in range(self.dim):
            columns[f'alpha_{i + 1}'] = self.probes[:, i]
        for i in range(self.dim):
            columns[f'beta_{i + 1}'] = self.responses[:, i]
        return pd.DataFrame(columns)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, allow_negative: bool = False) -> 'ProbeResponseDataset':
        alpha_cols = sorted(
            (c for c in frame.columns if c.startswith('alpha_')), key=lambda c: int(c.split('_')[1])
        )
        beta_cols = sorted(
            (c for c in frame.columns if c.startswith('beta_')), key=lambda c: int(c.split('_')[1])
        )
        if not alpha_cols or len(alpha_cols) != len(beta_cols):
            raise DatasetError(
                f"expected matching alpha_i/beta_i columns, got {list(frame.columns)}"
            )
        if 'epoch' in frame.columns:
            frame = frame.sort_values('epoch')
        return cls.from_arrays(
            frame[alpha_cols].to_numpy(), frame[beta_cols].to_numpy(), allow_negative=allow_negative
        )


def write_dataset_csv(dataset: ProbeResponseDataset, path: Union[str, Path]) -> Path:
    """Write a dataset as CSV with 17 significant digits (exact round trip)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dataset.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.info(f"Wrote {dataset.n_epochs} epochs (m={dataset.dim}) to {path}")
    return path


def read_dataset_csv(path: Union[str, Path], allow_negative: bool = False) -> ProbeResponseDataset:
    """Read a dataset CSV written by :func:`write_dataset_csv`."""
    path = Path(path)
    try:
        frame = pd.read_csv(path, float_precision='round_trip')
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        logger.error(f"Error reading dataset {path}: {e}")
        raise DatasetError(f"cannot read dataset {path}: {e}") from e
    return ProbeResponseDataset.from_frame(frame, allow_negative=allow_negative)
