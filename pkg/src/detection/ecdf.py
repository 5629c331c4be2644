"""
Empirical distribution of the noise functional M.
"""
import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ..exceptions import DatasetError

logger = logging.getLogger(__name__)


class EmpiricalCdf:
    """Right-continuous step CDF of L samples, F(x) = #{M <= x} / L."""

    def __init__(self, samples):
        samples = np.asarray(samples, dtype=float).ravel()
        if samples.size < 1:
            raise DatasetError("empirical CDF needs at least one sample")
        if not np.all(np.isfinite(samples)):
            raise DatasetError("empirical CDF samples must be finite")
        self.samples = np.sort(samples)

    def __len__(self) -> int:
        return self.samples.size

    def __call__(self, x) -> Union[float, np.ndarray]:
        values = np.searchsorted(self.samples, x, side='right') / self.samples.size
        return float(values) if np.ndim(values) == 0 else values

    def upper_tail(self, x) -> Union[float, np.ndarray]:
        """Fraction of samples at or above ``x``: the mass of M on [x, inf)."""
        values = 1.0 - np.searchsorted(self.samples, x, side='left') / self.samples.size
        return float(values) if np.ndim(values) == 0 else values

    def mean(self) -> float:
        return float(self.samples.mean())

    def standard_error(self) -> float:
        if self.samples.size < 2:
            return 0.0
        return float(self.samples.std(ddof=1) / np.sqrt(self.samples.size))

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame({'M': self.samples}).to_csv(
            path, index=False, float_format='%.17g', lineterminator='\n'
        )
        logger.info(f"Saved empirical CDF ({len(self)} samples) to {path}")
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> 'EmpiricalCdf':
        try:
            frame = pd.read_csv(path, float_precision='round_trip')
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            logger.error(f"Error reading empirical CDF {path}: {e}")
            raise DatasetError(f"cannot read empirical CDF {path}: {e}") from e
        if 'M' not in frame.columns:
            raise DatasetError(f"{path} has no 'M' column")
        return cls(frame['M'].to_numpy())
