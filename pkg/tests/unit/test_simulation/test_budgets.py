"""
Tests for the Riccati spectral budget and its maximizer.
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.exceptions import EmptyBudgetError
from src.revealed import check_nonlinear_garp
from src.simulation import (
    RiccatiBudget,
    ScenarioConfig,
    UtilitySpec,
    generate_dataset,
    riccati_budget_spec,
)

A = [[1.0, 1.0], [0.0, 1.0]]
C = [[1.0, 0.0], [0.0, 1.0]]
UPPER = [10.0, 10.0]


class TestRiccatiBudget:

    @pytest.fixture
    def budget(self):
        return RiccatiBudget(A, C, [0.8, 0.9], lambda_bar=3.6, upper=UPPER)

    def test_increasing_in_response(self, budget):
        assert budget([0.5, 0.5]) < budget([1.0, 0.5]) < budget([1.0, 1.0])

    def test_value_independent_of_call_history(self, budget):
        cold = budget([2.0, 3.0])
        budget([9.0, 0.1])
        budget.activity_window()
        assert budget([2.0, 3.0]) == cold

    def test_warm_chain_matches_cold_start(self, budget):
        g = budget.warm_chain()
        for beta in ([9.0, 0.1], [2.0, 3.0], [2.0 + 1e-4, 3.0]):
            assert_allclose(g(beta), budget(beta), atol=1e-9)

    def test_activity_window_ordered(self, budget):
        lower, lambda_l = budget.activity_window()
        assert lower < lambda_l

    def test_maximizer_is_feasible_and_active(self, budget):
        lower, lambda_l = budget.activity_window()
        if not lower < 3.6 <= lambda_l:
            pytest.skip("probe outside the activity window")
        beta = budget.maximize(UtilitySpec())
        assert np.all(beta > 0) and np.all(beta <= np.asarray(UPPER))
        assert abs(budget(beta)) <= 1e-6

    def test_maximizer_beats_feasible_points(self, budget, rng):
        lower, lambda_l = budget.activity_window()
        if not lower < 3.6 <= lambda_l:
            pytest.skip("probe outside the activity window")
        utility = UtilitySpec()
        best = utility.value(budget.maximize(utility))
        for point in rng.uniform(0.0, 10.0, size=(30, 2)):
            if budget(point) <= 0.0:
                assert utility.value(point) <= best * (1 + 1e-6)

    def test_inactive_budget_returns_corner(self):
        budget = RiccatiBudget(A, C, [0.8, 0.9], lambda_bar=1e6, upper=UPPER)
        assert budget.maximize(UtilitySpec()).tolist() == UPPER

    def test_empty_budget(self):
        budget = RiccatiBudget(A, C, [0.5, 0.5], lambda_bar=0.01, upper=UPPER)
        with pytest.raises(EmptyBudgetError):
            budget.maximize(UtilitySpec())


@pytest.mark.slow
class TestNonlinearScenario:

    @pytest.fixture
    def dataset(self):
        return generate_dataset(ScenarioConfig(scenario='nonlinear-waveform', n_epochs=4, seed=2))

    def test_responses_on_active_budgets(self, dataset):
        budgets = riccati_budget_spec(dataset, A, C, 3.6, UPPER)
        assert len(budgets) == dataset.n_epochs
        for g, beta in zip(budgets.functions, dataset.responses):
            assert_allclose(g(beta), 0.0, atol=1e-6)

    def test_cognitive_record_passes_nonlinear_garp(self, dataset):
        budgets = riccati_budget_spec(dataset, A, C, 3.6, UPPER)
        assert check_nonlinear_garp(dataset, budgets).consistent
