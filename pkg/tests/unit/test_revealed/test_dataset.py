"""
Tests for probe/response datasets and their CSV form.
"""
import numpy as np
import pandas as pd
import pytest

from src.exceptions import DatasetError
from src.revealed import ProbeResponseDataset, check_garp, read_dataset_csv, write_dataset_csv


class TestProbeResponseDataset:
    """Validation of dataset invariants."""

    def test_shape_properties(self, violating_dataset):
        assert violating_dataset.n_epochs == 2
        assert violating_dataset.dim == 2

    def test_rejects_nonpositive_probe(self):
        with pytest.raises(DatasetError):
            ProbeResponseDataset.from_arrays([[1.0, 0.0]], [[1.0, 1.0]])

    def test_rejects_negative_response_unless_allowed(self):
        with pytest.raises(DatasetError):
            ProbeResponseDataset.from_arrays([[1.0, 1.0]], [[-0.1, 1.0]])
        dataset = ProbeResponseDataset.from_arrays([[1.0, 1.0]], [[-0.1, 1.0]], allow_negative=True)
        assert dataset.responses[0, 0] == -0.1

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(DatasetError, match="dimension mismatch"):
            ProbeResponseDataset.from_arrays([[1.0, 1.0]], [[1.0, 1.0, 1.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(DatasetError):
            ProbeResponseDataset.from_arrays([[1.0, np.inf]], [[1.0, 1.0]])

    def test_dataset_error_is_a_value_error(self):
        with pytest.raises(ValueError):
            ProbeResponseDataset.from_arrays([[1.0]], [[1.0, 2.0]])

    @pytest.mark.parametrize('factor', [0.01, 0.5, 7.0, 1e4])
    def test_scaling_probes_keeps_verdict(self, violating_dataset, cognitive_dataset, factor):
        for dataset in (violating_dataset, cognitive_dataset):
            assert check_garp(dataset.scaled(factor)).consistent == check_garp(dataset).consistent

    def test_scaled_rejects_nonpositive_factor(self, violating_dataset):
        with pytest.raises(DatasetError):
            violating_dataset.scaled(0.0)


class TestDatasetCsv:
    """CSV writer and reader."""

    def test_header(self, violating_dataset, tmp_path):
        path = write_dataset_csv(violating_dataset, tmp_path / 'd.csv')
        header = path.read_text().splitlines()[0]
        assert header == 'epoch,alpha_1,alpha_2,beta_1,beta_2'

    def test_round_trip_is_bit_exact(self, tmp_path, rng):
        probes = rng.uniform(0.1, 1.1, size=(30, 3))
        responses = rng.uniform(0.0, 5.0, size=(30, 3)) / 3.0
        dataset = ProbeResponseDataset.from_arrays(probes, responses)

        first = write_dataset_csv(dataset, tmp_path / 'a.csv')
        loaded = read_dataset_csv(first)
        second = write_dataset_csv(loaded, tmp_path / 'b.csv')

        assert np.array_equal(loaded.probes, dataset.probes)
        assert np.array_equal(loaded.responses, dataset.responses)
        assert first.read_bytes() == second.read_bytes()

    def test_rows_sorted_by_epoch(self, tmp_path):
        frame = pd.DataFrame({
            'epoch': [2, 1], 'alpha_1': [2.0, 1.0], 'beta_1': [0.5, 0.25],
        })
        frame.to_csv(tmp_path / 'shuffled.csv', index=False)
        dataset = read_dataset_csv(tmp_path / 'shuffled.csv')
        assert dataset.probes[:, 0].tolist() == [1.0, 2.0]

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError, match="cannot read"):
            read_dataset_csv(tmp_path / 'missing.csv')

    def test_unmatched_columns(self, tmp_path):
        pd.DataFrame({'alpha_1': [1.0], 'gamma_1': [1.0]}).to_csv(tmp_path / 'bad.csv', index=False)
        with pytest.raises(DatasetError, match="alpha_i/beta_i"):
            read_dataset_csv(tmp_path / 'bad.csv')
