"""
Tests for the phase-1 simplex feasibility oracle.
"""
import numpy as np
import pytest
from scipy.optimize import linprog

from src.exceptions import ConvergenceError
from src.revealed import afriat_lp_feasible, phase_one_feasible


class TestPhaseOne:

    def test_feasible_box(self):
        feasible, x = phase_one_feasible(np.array([[1.0, 1.0]]), np.array([2.0]))
        assert feasible
        assert np.all(x >= 0) and x.sum() <= 2.0 + 1e-12

    def test_infeasible_bounds(self):
        # x <= 1 and x >= 2
        feasible, x = phase_one_feasible(np.array([[1.0], [-1.0]]), np.array([1.0, -2.0]))
        assert not feasible
        assert x is None

    def test_returned_point_satisfies_constraints(self):
        A = np.array([[1.0, -1.0], [-1.0, -2.0], [2.0, 1.0]])
        b = np.array([1.0, -2.0, 8.0])
        feasible, x = phase_one_feasible(A, b)
        assert feasible
        assert np.all(A @ x <= b + 1e-9)

    def test_agrees_with_highs(self, rng):
        for _ in range(100):
            A = rng.normal(size=(6, 4))
            b = rng.normal(size=6)
            expected = linprog(np.zeros(4), A_ub=A, b_ub=b, bounds=[(0, None)] * 4, method='highs').status == 0
            assert phase_one_feasible(A, b)[0] == expected

    def test_pivot_budget(self):
        with pytest.raises(ConvergenceError):
            phase_one_feasible(np.array([[1.0], [-1.0]]), np.array([1.0, -0.5]), max_pivots=0)


class TestAfriatLp:

    def test_violating_pair(self):
        assert not afriat_lp_feasible(np.array([[0.0, -1.0], [-1.0, 0.0]]))

    def test_weak_cycle_feasible(self):
        assert afriat_lp_feasible(np.zeros((3, 3)))

    def test_single_epoch(self):
        assert afriat_lp_feasible(np.zeros((1, 1)))

    def test_one_sided_preference(self):
        assert afriat_lp_feasible(np.array([[0.0, -1.0], [2.0, 0.0]]))
