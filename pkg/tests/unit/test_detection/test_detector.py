"""
Tests for the minimum-perturbation statistic and the noisy-data detector.
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.detection import (
    REPORT_COLUMNS,
    EmpiricalCdf,
    NoiseModel,
    decide,
    detect,
    detection_sweep,
    min_perturbation,
    min_perturbation_probe,
    min_perturbation_response,
    perturbed_feasible,
    sample_m_probe,
    sample_m_response,
    trial_seed,
    type_i_lower_bound,
)
from src.revealed import cross_cost_matrix
from src.simulation import ScenarioConfig, UniformSimplexResponder, build_responder


class TestMinPerturbation:

    def test_violating_pair(self, violating_dataset):
        phi = min_perturbation(cross_cost_matrix(violating_dataset))
        assert abs(phi - 1.0) <= 2e-9

    def test_consistent_data_need_no_perturbation(self, cognitive_dataset):
        assert min_perturbation(cross_cost_matrix(cognitive_dataset)) == 0.0

    def test_single_epoch(self):
        assert min_perturbation(np.zeros((1, 1))) == 0.0

    def test_bracketed_by_feasibility(self, rng, make_random_dataset):
        for _ in range(30):
            a = cross_cost_matrix(make_random_dataset(rng, 6, 3))
            phi = min_perturbation(a)
            assert perturbed_feasible(a, phi)
            if phi > 2e-9:
                assert not perturbed_feasible(a, phi - 2e-9)

    def test_matches_grid_scan(self, rng, make_random_dataset):
        a = cross_cost_matrix(make_random_dataset(rng, 5, 2))
        grid = np.linspace(0.0, 2.0, 2001)
        feasible = [phi for phi in grid if perturbed_feasible(a, phi)]
        phi = min_perturbation(a)
        assert phi <= feasible[0] + 1e-9
        assert phi > feasible[0] - (grid[1] - grid[0]) - 1e-9

    def test_response_and_probe_sides(self, violating_dataset):
        assert abs(min_perturbation_response(violating_dataset.probes, violating_dataset.responses) - 1.0) <= 2e-9
        assert abs(min_perturbation_probe(violating_dataset.probes, violating_dataset.responses) - 1.0) <= 2e-9

    def test_negative_noisy_responses_accepted(self):
        phi = min_perturbation_response([[1.0, 1.0], [1.0, 3.0]], [[2.0, -0.1], [0.0, 1.0]])
        assert phi >= 0.0


class TestLawOfM:

    def test_zero_noise_gives_point_mass(self, cognitive_dataset, rng):
        cdf = sample_m_response(cognitive_dataset.probes, NoiseModel(sigma=0.0), 50, rng)
        assert np.all(cdf.samples == 0.0)

    def test_folded_normal_mean(self, rng):
        # M = |eps_1 - eps_2| for two unit probes in one dimension
        cdf = sample_m_response([[1.0], [1.0]], NoiseModel(sigma=1.0), 20000, rng)
        assert abs(cdf.mean() - 2.0 / np.sqrt(np.pi)) <= 5 * cdf.standard_error()

    def test_probe_side_folded_normal(self, rng):
        cdf = sample_m_probe([[1.0], [0.0]], NoiseModel(sigma=1.0), 20000, rng)
        # eps_t'(beta_t - beta_s) = +/- eps_t, max of the two
        assert cdf.upper_tail(0.0) > 0.7

    def test_scales_with_sigma(self, rng):
        probes = rng.uniform(0.1, 1.1, size=(5, 2))
        small = sample_m_response(probes, NoiseModel(sigma=0.1), 5000, np.random.default_rng(1))
        large = sample_m_response(probes, NoiseModel(sigma=1.0), 5000, np.random.default_rng(1))
        assert_allclose(large.samples, 10.0 * small.samples, rtol=1e-12)

    def test_single_epoch(self, rng):
        cdf = sample_m_response([[1.0, 2.0]], NoiseModel(sigma=1.0), 10, rng)
        assert len(cdf) == 10 and cdf.mean() == 0.0


class TestDecision:

    def test_zero_noise_statistic_is_one(self, cognitive_dataset, rng):
        outcome = detect(
            cognitive_dataset.probes, cognitive_dataset.responses, NoiseModel(sigma=0.0),
            'response', 0.05, 100, rng,
        )
        assert outcome.phi_star == 0.0
        assert outcome.statistic == 1.0
        assert outcome.cognitive

    def test_ties_go_to_h1(self):
        cdf = EmpiricalCdf([0.0] * 95 + [10.0] * 5)
        assert decide(10.0, cdf, 0.05).decision == 'H1'
        assert decide(9.0, cdf, 0.04).decision == 'H0'

    def test_statistic_is_closed_upper_tail(self):
        cdf = EmpiricalCdf([0.1, 0.2, 0.3, 0.4])
        assert decide(0.25, cdf, 0.05).statistic == 1.0 - cdf(0.25) == 0.5
        assert decide(0.3, cdf, 0.05).statistic == 0.5
        assert 1.0 - cdf(0.3) == 0.25

    def test_rejects_bad_gamma(self):
        with pytest.raises(ValueError):
            decide(0.0, EmpiricalCdf([0.0]), 1.0)

    def test_unknown_target(self, violating_dataset, rng):
        with pytest.raises(ValueError):
            detect(violating_dataset.probes, violating_dataset.responses, NoiseModel(), 'both', 0.05, 10, rng)


class TestTypeIBound:

    def test_single_epoch_at_zero(self):
        assert_allclose(type_i_lower_bound(0.0, [[0.3, 0.4]]), 0.5 * np.sqrt(2.0 / np.pi))

    def test_decreasing_in_phi(self):
        probes = [[0.5, 0.5], [1.0, 0.2]]
        values = [type_i_lower_bound(phi, probes) for phi in (0.0, 0.5, 1.0, 3.0)]
        assert all(x > y for x, y in zip(values, values[1:]))

    @pytest.mark.slow
    def test_below_simulated_tail(self):
        probes = np.array([[0.6, 0.3], [0.6, 0.3]])
        cdf = sample_m_response(probes, NoiseModel(sigma=1.0), 20000, np.random.default_rng(3))
        for phi in (0.1, 0.5, 1.0):
            bound = type_i_lower_bound(phi, probes)
            se = np.sqrt(bound * (1 - bound) / len(cdf))
            assert cdf.upper_tail(phi) >= bound - 3 * se

    def test_rejects_negative_phi(self):
        with pytest.raises(ValueError):
            type_i_lower_bound(-1.0, [[1.0]])


class TestDetectionSweep:

    def test_report_layout_and_seeds(self):
        scenario = ScenarioConfig(n_epochs=5)
        report = detection_sweep(
            scenario, build_responder(scenario), [0.0, 0.1], 'response',
            gamma=0.05, trials=3, n_samples=50, root_seed=7,
        )
        assert list(report.columns) == REPORT_COLUMNS
        assert len(report) == 6
        assert report['seed'].iloc[4] == trial_seed(7, 1, 1)
        assert (report.loc[report['sigma'] == 0.0, 'decision'] == 'H0').all()

    def test_deterministic(self):
        scenario = ScenarioConfig(n_epochs=5)
        kwargs = dict(target='response', gamma=0.05, trials=2, n_samples=30, root_seed=11)
        first = detection_sweep(scenario, build_responder(scenario), [0.2], **kwargs)
        second = detection_sweep(scenario, build_responder(scenario), [0.2], **kwargs)
        assert first.equals(second)


@pytest.mark.slow
class TestFalseAlarmControl:

    @pytest.fixture
    def beam(self):
        return ScenarioConfig(scenario='beam')

    def test_cognitive_false_alarm_rate(self, beam):
        report = detection_sweep(
            beam, build_responder(beam), [0.05], 'response',
            gamma=0.05, trials=1000, n_samples=1000, root_seed=2024,
        )
        assert len(report) == 1000
        assert (report['decision'] == 'H1').mean() <= 0.07

    def test_low_noise_separates_cognitive_from_random(self, beam):
        kwargs = dict(target='response', gamma=0.05, trials=40, n_samples=200, root_seed=31)
        cognitive = detection_sweep(beam, build_responder(beam), [0.001], **kwargs)
        random = detection_sweep(beam, UniformSimplexResponder(), [0.001], **kwargs)
        assert (cognitive['decision'] == 'H0').mean() >= 0.8
        assert (random['decision'] == 'H1').mean() >= 0.8


class TestTightness:

    def test_offset_never_lowers_rejections(self):
        scenario = ScenarioConfig(scenario='beam', n_epochs=8)
        kwargs = dict(target='response', gamma=0.05, trials=10, n_samples=100, root_seed=5)
        base = detection_sweep(scenario, build_responder(scenario), [0.05], **kwargs)
        shifted = detection_sweep(scenario, build_responder(scenario), [0.05], phi_offset=0.01, **kwargs)
        assert (shifted['statistic'] <= base['statistic']).all()
        assert (shifted['decision'] == 'H1').sum() >= (base['decision'] == 'H1').sum()

    def test_equal_responses_give_zero_m(self, rng):
        cdf = sample_m_probe([[0.3, 0.7]] * 4, NoiseModel(sigma=2.0), 100, rng)
        assert np.all(cdf.samples == 0.0)
