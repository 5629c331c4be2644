"""
Tests for scenario configs, responders and seeded dataset generation.
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from src.exceptions import DatasetError, SingularMatrixError
from src.revealed import check_garp
from src.simulation import (
    BeamConfig,
    ScenarioConfig,
    UtilitySpec,
    beam_allocate,
    build_responder,
    generate_dataset,
    make_responder,
    precision_trace,
    predicted_precision_probe,
    sample_probes,
)
from src.simulation.responders import uniform_simplex_draw


class TestScenarioConfig:

    def test_linear_defaults(self):
        cfg = ScenarioConfig()
        assert (cfg.n_epochs, cfg.m) == (50, 2)
        assert cfg.utility.kind == 'determinant'

    def test_beam_defaults(self):
        cfg = ScenarioConfig(scenario='beam')
        assert (cfg.n_epochs, cfg.m) == (20, 3)
        assert cfg.utility.exponents == [0.5, 1.0, 2.0]

    def test_rejects_empty_probe_range(self):
        with pytest.raises(ValidationError, match="probe_high"):
            ScenarioConfig(probe_low=1.0, probe_high=0.5)

    def test_rejects_exponent_count(self):
        with pytest.raises(ValidationError):
            ScenarioConfig(m=3, utility=UtilitySpec.cobb_douglas([1.0, 1.0]))

    def test_nonlinear_only_cognitive(self):
        with pytest.raises(ValidationError):
            ScenarioConfig(scenario='nonlinear-waveform', responder='uniform-simplex')

    def test_rejects_unknown_keys(self):
        with pytest.raises(ValidationError):
            ScenarioConfig(epochs=5)


class TestGenerateDataset:

    def test_same_seed_bit_identical(self):
        cfg = ScenarioConfig(n_epochs=10, seed=42)
        first, second = generate_dataset(cfg), generate_dataset(cfg)
        assert np.array_equal(first.probes, second.probes)
        assert np.array_equal(first.responses, second.responses)

    def test_different_seeds_differ(self):
        first = generate_dataset(ScenarioConfig(n_epochs=10, seed=1))
        second = generate_dataset(ScenarioConfig(n_epochs=10, seed=2))
        assert not np.array_equal(first.probes, second.probes)

    def test_probes_in_range(self):
        dataset = generate_dataset(ScenarioConfig(n_epochs=200, seed=5))
        assert np.all(dataset.probes >= 0.1) and np.all(dataset.probes < 1.1)

    def test_linear_responses_exhaust_budget(self):
        dataset = generate_dataset(ScenarioConfig(n_epochs=30, pbar=2.0, seed=6))
        assert_allclose(np.sum(dataset.probes * dataset.responses, axis=1), 2.0)

    def test_beam_cognitive_consistent(self):
        dataset = generate_dataset(ScenarioConfig(scenario='beam', seed=7))
        assert np.all(dataset.probes > 0)
        assert check_garp(dataset).consistent

    def test_uniform_simplex_responses(self):
        dataset = generate_dataset(ScenarioConfig(scenario='beam', responder='uniform-simplex', seed=8))
        assert np.all(dataset.responses >= 0)
        assert np.all(dataset.responses.sum(axis=1) <= 1.0)

    def test_random_cobb_douglas_exhausts_budget(self):
        dataset = generate_dataset(ScenarioConfig(responder='random-cobb-douglas', n_epochs=20, seed=9))
        assert_allclose(np.sum(dataset.probes * dataset.responses, axis=1), 1.0)

    @pytest.mark.parametrize('kind', ['random-cobb-douglas', 'uniform-simplex'])
    def test_random_responder_fails_garp(self, kind):
        failures = sum(
            not check_garp(generate_dataset(ScenarioConfig(scenario='beam', responder=kind, seed=seed))).consistent
            for seed in range(200)
        )
        assert failures >= 180

    def test_uniform_simplex_acceptance_rate(self):
        class CountingGenerator:
            def __init__(self, seed):
                self.rng = np.random.default_rng(seed)
                self.draws = 0

            def uniform(self, *args, **kwargs):
                self.draws += 1
                return self.rng.uniform(*args, **kwargs)

        counter = CountingGenerator(17)
        for _ in range(3000):
            beta = uniform_simplex_draw(3, counter)
            assert beta.sum() <= 1.0 and np.all((beta >= 0.0) & (beta <= 1.0))
        assert abs(3000 / counter.draws - 1.0 / 6.0) <= 0.015


class TestProbesAndResponders:

    def test_tracker_probes(self, rng):
        cfg = ScenarioConfig(scenario='beam', probe_source='tracker', n_epochs=3)
        probes = sample_probes(cfg, rng)
        assert probes.shape == (3, 3)
        assert np.all(probes > 0)

    def test_precision_falls_with_maneuvering(self):
        alpha = predicted_precision_probe(BeamConfig(m=3), [0.5 * np.eye(2), np.eye(2), 2.0 * np.eye(2)])
        assert alpha[0] > alpha[1] > alpha[2]

    def test_build_responder_cognitive_flag(self):
        assert build_responder(ScenarioConfig()).cognitive
        assert not build_responder(ScenarioConfig(responder='uniform-simplex')).cognitive

    def test_unknown_responder(self):
        with pytest.raises(DatasetError):
            make_responder('oracle')

    def test_beam_needs_two_targets(self):
        with pytest.raises(DatasetError):
            BeamConfig(m=1)


class TestBeamAllocation:

    def test_cobb_douglas_shares(self):
        beta = beam_allocate(UtilitySpec.cobb_douglas([0.5, 1.0, 2.0]), [1.0, 1.0, 1.0], BeamConfig(m=3), warn=False)
        assert_allclose(beta, [1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0])

    def test_scaled_probes_scale_allocation(self):
        spec = UtilitySpec.cobb_douglas([0.2, 0.3, 0.5])
        alpha = np.array([0.01, 0.03, 0.02])
        base = beam_allocate(spec, alpha, BeamConfig(m=3), warn=False)
        assert_allclose(beam_allocate(spec, 4.0 * alpha, BeamConfig(m=3), warn=False), base / 4.0)

    @pytest.mark.parametrize('covariance,expected', [
        (np.eye(2), 2.0),
        (np.diag([2.0, 4.0]), 0.75),
    ])
    def test_precision_trace(self, covariance, expected):
        assert_allclose(precision_trace(covariance), expected)

    def test_precision_trace_singular(self):
        with pytest.raises(SingularMatrixError):
            precision_trace(np.diag([1.0, 0.0]))
