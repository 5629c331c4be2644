"""
Tests for the Kalman recursion and the Riccati/Lyapunov solvers.
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.exceptions import ConvergenceError, DatasetError, SingularMatrixError
from src.tracking import (
    KalmanState,
    TrackerParams,
    are_residual,
    kalman_step,
    loewner_leq,
    riccati_iterates,
    solve_are,
    solve_lyapunov,
    target_transition,
)


def scalar_params(q: float, r: float) -> TrackerParams:
    return TrackerParams(A=[[1.0]], C=[[1.0]], Q=[[q]], R=[[r]])


class TestTrackerParams:

    def test_from_spectra(self):
        params = TrackerParams.from_spectra(np.eye(2), np.eye(2), [2.0, 4.0], [0.5, 3.0])
        assert_allclose(params.Q, np.diag([0.5, 0.25]))
        assert_allclose(params.R, np.diag([0.5, 3.0]))

    def test_rejects_indefinite_r(self):
        with pytest.raises(DatasetError, match="positive definite"):
            TrackerParams(A=np.eye(2), C=np.eye(2), Q=np.eye(2), R=np.diag([1.0, 0.0]))

    def test_rejects_asymmetric_q(self):
        with pytest.raises(DatasetError, match="symmetric"):
            TrackerParams(A=np.eye(2), C=np.eye(2), Q=[[1.0, 0.1], [0.0, 1.0]], R=np.eye(2))

    def test_rejects_inconsistent_shapes(self):
        with pytest.raises(DatasetError, match="inconsistent"):
            TrackerParams(A=np.eye(2), C=np.eye(3), Q=np.eye(2), R=np.eye(3))

    def test_allows_zero_process_noise(self):
        params = TrackerParams(A=np.eye(2), C=np.eye(2), Q=np.zeros((2, 2)), R=np.eye(2))
        assert params.state_dim == 2

    def test_with_noise(self):
        params = scalar_params(1.0, 2.0).with_noise(R=[[5.0]])
        assert params.R[0, 0] == 5.0
        assert params.Q[0, 0] == 1.0


class TestKalmanStep:

    def test_scalar_update(self):
        p, q, r = 2.0, 1.0, 3.0
        state = KalmanState.initial([1.0], [[p]])
        nxt = kalman_step(state, [4.0], scalar_params(q, r))
        gain = (p + q) / (p + q + r)
        assert_allclose(nxt.xhat, [1.0 + gain * 3.0])
        assert_allclose(nxt.Sigma, [[(p + q) * r / (p + q + r)]])

    def test_covariance_stays_symmetric(self, rng):
        params = TrackerParams(
            A=target_transition(0.5), C=np.eye(2), Q=np.diag([0.2, 0.1]), R=np.diag([1.0, 2.0])
        )
        state = KalmanState.initial(np.zeros(2), np.eye(2))
        for _ in range(20):
            state = kalman_step(state, rng.normal(size=2), params)
            assert np.array_equal(state.Sigma, state.Sigma.T)

    def test_ill_conditioned_innovation(self):
        params = TrackerParams(A=np.eye(2), C=np.eye(2), Q=np.zeros((2, 2)), R=np.diag([1.0, 1e-14]))
        state = KalmanState.initial(np.zeros(2), np.zeros((2, 2)))
        with pytest.raises(SingularMatrixError):
            kalman_step(state, np.zeros(2), params)

    def test_uninformative_measurement(self):
        params = TrackerParams(A=np.zeros((2, 2)), C=np.eye(2), Q=np.eye(2), R=np.eye(2) * 1e12)
        nxt = kalman_step(KalmanState.initial(np.zeros(2), np.eye(2)), [5.0, -5.0], params)
        assert_allclose(nxt.Sigma, np.eye(2), atol=1e-6)

    def test_covariance_ignores_observations(self, rng):
        params = TrackerParams(A=target_transition(1.0), C=np.eye(2), Q=np.eye(2), R=np.diag([0.5, 2.0]))
        first = second = KalmanState.initial(np.zeros(2), np.eye(2))
        for _ in range(10):
            first = kalman_step(first, rng.normal(size=2), params)
            second = kalman_step(second, 100.0 * rng.normal(size=2), params)
        assert np.array_equal(first.Sigma, second.Sigma)

    def test_dimension_mismatch(self):
        with pytest.raises(DatasetError):
            kalman_step(KalmanState.initial([0.0], [[1.0]]), [1.0, 2.0], scalar_params(1.0, 1.0))


class TestSolveAre:

    @pytest.mark.parametrize('q,r', [(1.0, 1.0), (0.1, 5.0), (3.0, 0.2)])
    def test_scalar_closed_form(self, q, r):
        expected = (q + np.sqrt(q * q + 4.0 * q * r)) / 2.0
        assert_allclose(solve_are(scalar_params(q, r))[0, 0], expected, rtol=1e-6)

    def test_residual_within_tolerance(self):
        params = TrackerParams(
            A=target_transition(1.0), C=np.eye(2), Q=np.diag([0.5, 0.25]), R=np.diag([2.0, 1.0])
        )
        Sigma = solve_are(params, tol=1e-10)
        assert np.max(np.abs(are_residual(params, Sigma))) <= 1e-10
        assert loewner_leq(np.zeros((2, 2)), Sigma)

    def test_monotone_in_measurement_noise(self):
        base = TrackerParams(A=[[1.0, 1.0], [0.0, 1.0]], C=np.eye(2), Q=np.eye(2) * 0.3, R=np.diag([1.0, 1.0]))
        worse = base.with_noise(R=np.diag([2.0, 1.5]))
        assert loewner_leq(solve_are(base), solve_are(worse), tol=1e-7)

    def test_zero_dynamics_reset_to_q(self):
        params = TrackerParams(A=np.zeros((2, 2)), C=np.eye(2), Q=np.diag([0.3, 0.6]), R=np.eye(2))
        assert_allclose(solve_are(params), params.Q)

    def test_warm_start_gives_same_fixed_point(self):
        params = scalar_params(0.5, 2.0)
        cold = solve_are(params)
        warm = solve_are(params, initial=cold * 1.01)
        assert_allclose(warm, cold, rtol=1e-6)

    def test_unstable_undetectable_system(self):
        params = TrackerParams(A=[[2.0]], C=[[0.0]], Q=[[1.0]], R=[[1.0]])
        with pytest.raises(ConvergenceError):
            solve_are(params, max_iter=50)

    def test_rejects_nonpositive_tol(self):
        with pytest.raises(ValueError):
            solve_are(scalar_params(1.0, 1.0), tol=0.0)

    def test_iterates_shrink(self):
        diffs = riccati_iterates(scalar_params(1.0, 1.0), 30)
        assert diffs[-1] < diffs[0]
        assert diffs[-1] < 1e-8


class TestLyapunov:

    def test_scalar(self):
        assert_allclose(solve_lyapunov([[0.5]], [[1.0]]), [[4.0 / 3.0]], rtol=1e-8)
        assert_allclose(solve_lyapunov([[0.5]], [[0.75]]), [[1.0]], rtol=1e-8)

    def test_solution_satisfies_equation(self):
        A = np.array([[0.5, 0.2], [0.0, 0.7]])
        Q = np.diag([1.0, 0.5])
        Sigma = solve_lyapunov(A, Q)
        assert_allclose(A @ Sigma @ A.T + Q, Sigma, atol=1e-8)

    def test_no_finite_solution(self):
        assert solve_lyapunov(target_transition(1.0), np.eye(2)) is None


class TestHelpers:

    def test_target_transition_blocks(self):
        F = target_transition(0.5, axes=2)
        assert F.shape == (4, 4)
        assert_allclose(F[:2, :2], [[1.0, 0.5], [0.0, 1.0]])
        assert np.all(F[:2, 2:] == 0)

    def test_loewner_order(self):
        assert loewner_leq(np.eye(2), 2 * np.eye(2))
        assert not loewner_leq(np.diag([1.0, 3.0]), np.diag([2.0, 2.0]))
