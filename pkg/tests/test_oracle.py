import math

import numpy as np
import pytest

from tracemin import (
    ConstraintSpec,
    CounterexampleParams,
    HyperbolicFactorization,
    compose_hyperbolic,
    counterexample_f,
    counterexample_gap,
    counterexample_matrices,
    counterexample_stationary,
    counterexample_y,
    feasible_sample,
    local_search,
    objective,
    solve_definite_min,
)
from helpers import random_unitary

P_DEFAULT = CounterexampleParams(mu=2.0, delta=0.25)


class TestHyperbolicFactorization:
    @pytest.mark.parametrize("seed", range(100))
    def test_round_trip_j_orthogonal(self, seed):
        rng = np.random.default_rng(seed)
        n_plus = int(rng.integers(1, 5))
        n_minus = int(rng.integers(1, 5))
        W = rng.standard_normal((n_plus, n_minus)) + 1j * rng.standard_normal(
            (n_plus, n_minus)
        )
        f = HyperbolicFactorization(
            w=W,
            v_plus=random_unitary(rng, n_plus),
            v_minus=random_unitary(rng, n_minus),
        )
        X = compose_hyperbolic(f)
        J = np.diag(np.concatenate([np.ones(n_plus), -np.ones(n_minus)]))
        assert np.max(np.abs(X.conj().T @ J @ X - J)) <= 1e-9

    def test_zero_w_gives_block_unitary(self):
        rng = np.random.default_rng(0)
        Vp = random_unitary(rng, 2)
        Vm = random_unitary(rng, 3)
        X = compose_hyperbolic(
            HyperbolicFactorization(np.zeros((2, 3)), Vp, Vm)
        )
        assert np.allclose(X[:2, :2], Vp)
        assert np.allclose(X[2:, 2:], Vm)
        assert np.allclose(X[:2, 2:], 0.0) and np.allclose(X[2:, :2], 0.0)

    def test_scalar_blocks_reproduce_y_tau(self):
        tau = 0.7
        X = compose_hyperbolic(
            HyperbolicFactorization(np.array([[tau]]), np.eye(1), np.eye(1))
        )
        assert np.allclose(X, counterexample_y(tau), atol=1e-12)

    def test_rejects_mismatched_blocks(self):
        with pytest.raises(ValueError):
            compose_hyperbolic(
                HyperbolicFactorization(np.zeros((2, 1)), np.eye(1), np.eye(1))
            )


class TestFeasibleSample:
    @pytest.mark.parametrize("seed", range(20))
    def test_residual_small(self, seed):
        rng = np.random.default_rng(seed + 400)
        n = int(rng.integers(3, 7))
        n_minus = int(rng.integers(1, n))
        B = np.diag(
            np.concatenate(
                [rng.uniform(0.5, 2.0, n - n_minus), -rng.uniform(0.5, 2.0, n_minus)]
            )
        )
        c = ConstraintSpec.signature(1, 1)
        X = feasible_sample(B, c, seed=seed)
        assert np.max(np.abs(X.conj().T @ B @ X - c.matrix())) <= 1e-8

    def test_nullspace_directions_allowed(self):
        B = np.diag([1.0, -1.0, 0.0])
        c = ConstraintSpec.signature(1, 1)
        X = feasible_sample(B, c, seed=1)
        assert np.max(np.abs(X.conj().T @ B @ X - c.matrix())) <= 1e-8
        # the sampler actually uses the free null coordinate
        assert np.max(np.abs(X[2, :])) > 0


class TestLocalSearch:
    def test_matches_ky_fan(self):
        A = np.diag([1.0, 2.0, 3.0])
        res = local_search(
            A, np.eye(3), np.eye(2), ConstraintSpec.plus_identity(2),
            restarts=5, iters=200, seed=0,
        )
        assert res.best_value == pytest.approx(3.0, abs=1e-5)
        assert res.feasibility_residual <= 1e-8
        assert not res.unbounded_flag

    def test_flags_unbounded_direction(self):
        A = np.diag([1.0, 2.0, 5.0])
        B = np.diag([1.0, 1.0, -1.0])
        res = local_search(
            A, B, np.diag([-1.0]), ConstraintSpec.plus_identity(1),
            restarts=5, iters=2000, seed=0,
        )
        assert res.unbounded_flag
        assert res.best_value < -1e6

    def test_zero_d_gives_zero(self):
        res = local_search(
            np.diag([1.0, -4.0]), np.diag([1.0, -1.0]), np.zeros((1, 1)),
            ConstraintSpec.plus_identity(1), restarts=2, iters=50, seed=0,
        )
        assert res.best_value == 0.0

    @pytest.mark.parametrize("seed", range(8))
    def test_never_beats_analytic_value(self, seed):
        rng = np.random.default_rng(seed + 700)
        n = int(rng.integers(2, 6))
        k = int(rng.integers(1, min(3, n) + 1))
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        B = G @ G.conj().T + 0.5 * np.eye(n)
        M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        A = 0.5 * (M + M.conj().T)
        Mk = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        D = 0.5 * (Mk + Mk.conj().T)
        rep = solve_definite_min(A, B, D, k)
        res = local_search(
            A, B, D, ConstraintSpec.plus_identity(k),
            restarts=10, iters=300, seed=seed,
        )
        assert res.best_value >= rep.value - 1e-8 * (1 + abs(rep.value))
        assert objective(A, D, res.best_X) == pytest.approx(res.best_value, abs=1e-10)


class TestCounterexampleClosedForm:
    def test_matches_direct_trace_on_grid(self):
        p = P_DEFAULT
        for sigma in np.linspace(-0.85, 0.85, 20):
            A, B, D = counterexample_matrices(p, float(sigma))
            for tau in np.linspace(0.0, 2.5, 20):
                Y = counterexample_y(float(tau))
                direct = float(np.real(np.trace(D @ Y.T @ A @ Y)))
                closed = counterexample_f(p, float(sigma), float(tau))
                assert abs(direct - closed) <= 1e-10
                assert np.max(np.abs(Y.T @ B @ Y - B)) <= 1e-12

    def test_origin_value(self):
        assert counterexample_f(P_DEFAULT, 0.0, 0.0) == pytest.approx(
            1.0 + P_DEFAULT.delta * P_DEFAULT.mu, abs=1e-14
        )

    def test_monotone_increase_at_sigma_zero(self):
        vals = [counterexample_f(P_DEFAULT, 0.0, t) for t in np.linspace(0.0, 2.0, 30)]
        assert np.all(np.diff(vals) > 0)

    def test_domain_guards(self):
        with pytest.raises(ValueError):
            counterexample_f(P_DEFAULT, 1.5, 0.0)
        with pytest.raises(ValueError):
            counterexample_f(P_DEFAULT, 0.0, -0.1)
        with pytest.raises(ValueError):
            counterexample_y(-1.0)
        with pytest.raises(ValueError):
            counterexample_matrices(P_DEFAULT, -1.0)


class TestCounterexampleParams:
    def test_accepts_valid(self):
        p = CounterexampleParams(mu=4.0, delta=0.2)
        assert 0 < p.gamma < 1 and -1 < p.nu < 0 and p.eta > 0

    @pytest.mark.parametrize("mu, delta", [(0.5, 0.2), (2.0, 0.6), (2.0, -0.1)])
    def test_rejects_out_of_domain(self, mu, delta):
        with pytest.raises(ValueError):
            CounterexampleParams(mu=mu, delta=delta)


class TestCounterexampleStationary:
    @pytest.mark.parametrize(
        "p", [P_DEFAULT, CounterexampleParams(mu=4.0, delta=0.2)]
    )
    def test_interior_and_gradient_vanishes(self, p):
        tau_star, sig_minus, sig_plus = counterexample_stationary(p)
        assert tau_star > 0
        assert 0 < sig_plus < 1
        assert sig_minus == -sig_plus
        h = 1e-6
        gs = (
            counterexample_f(p, sig_plus + h, tau_star)
            - counterexample_f(p, sig_plus - h, tau_star)
        ) / (2 * h)
        gt = (
            counterexample_f(p, sig_plus, tau_star + h)
            - counterexample_f(p, sig_plus, tau_star - h)
        ) / (2 * h)
        assert math.hypot(gs, gt) <= 1e-6

    def test_default_parameter_values(self):
        tau_star, _, sig_plus = counterexample_stationary(P_DEFAULT)
        assert tau_star == pytest.approx(0.2987568425807008, abs=1e-12)
        assert sig_plus == pytest.approx(0.5140989589607083, abs=1e-12)


class TestCounterexampleGap:
    @pytest.mark.parametrize(
        "p", [P_DEFAULT, CounterexampleParams(mu=4.0, delta=0.2)]
    )
    def test_positive_margin(self, p):
        f_min, bound, margin = counterexample_gap(p)
        assert f_min == pytest.approx(2.0 * math.sqrt(p.delta * p.mu), abs=1e-12)
        assert bound == pytest.approx(min(1 + p.delta * p.mu, p.mu + p.delta), abs=1e-14)
        assert margin > 0
        assert margin == pytest.approx(bound - f_min, abs=1e-14)

    def test_default_values(self):
        f_min, bound, margin = counterexample_gap(P_DEFAULT)
        assert f_min == pytest.approx(1.4142135623730951, abs=1e-14)
        assert margin == pytest.approx(0.08578643762690485, abs=1e-14)

    def test_closed_form_minimum_matches_stationary_point(self):
        p = P_DEFAULT
        tau_star, _, sig_plus = counterexample_stationary(p)
        f_min, _, _ = counterexample_gap(p)
        assert counterexample_f(p, sig_plus, tau_star) == pytest.approx(
            f_min, abs=1e-12
        )
