import math

import numpy as np
import pytest

from algorithms.fairness import (
    NonFiniteObjectiveError, fairness_closed_form, gradient_mu, hfro_optimize, normalization_g, path_endpoints,
    penalized_objective, project_simplex,
)
from algorithms.metrics import entropy, jain_index
from models import SystemConfig
from tests.conftest import random_simplex


def central_difference(mu, rho, chi, nu, lam, xi_f, step=1e-6):
    grad = np.zeros_like(mu)
    for k in range(mu.size):
        shift = np.zeros_like(mu)
        shift[k] = step
        grad[k] = (
            penalized_objective(mu + shift, rho, chi, nu, lam, xi_f)
            - penalized_objective(mu - shift, rho, chi, nu, lam, xi_f)
        ) / (2 * step)
    return grad


class TestNormalization:
    def test_values(self):
        assert normalization_g([1.0, 3.0]) == pytest.approx(0.5)
        assert normalization_g([1.0, 1.0]) == pytest.approx(1.0)
        assert normalization_g([1.0]) == pytest.approx(1.0)

    @pytest.mark.parametrize('rho', [[1.0, 0.0], [-1.0], [1.0, float('nan')], []])
    def test_nonpositive_rejected(self, rho):
        with pytest.raises(ValueError):
            normalization_g(rho)


class TestClosedForm:
    def test_values(self):
        np.testing.assert_allclose(fairness_closed_form([1.0, 1.0]), [0.5, 0.5])
        np.testing.assert_allclose(fairness_closed_form([1.0, 3.0]), [0.75, 0.25])

    def test_equalizes_products(self, rng):
        for _ in range(100):
            rho = rng.exponential(10.0, int(rng.integers(1, 9))) + 1e-3
            assert jain_index(fairness_closed_form(rho), rho) == pytest.approx(1.0, abs=1e-12)

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            fairness_closed_form([2.0, 0.0])


class TestPenalizedObjective:
    def test_fair_point_at_chi_one(self):
        rho = np.array([1.0, 4.0, 9.0])
        mu = fairness_closed_form(rho)
        value = penalized_objective(mu, rho, chi=1.0, nu=0.01, lam=10.0, xi_f=0.9)
        assert value == pytest.approx(1 - 0.01 * entropy(mu))

    def test_pure_throughput_is_linear(self):
        rho = np.array([1.0, 3.0])
        mu = np.array([0.3, 0.7])
        expected = 0.5 * (0.3 * 1.0 + 0.7 * 2.0)
        assert penalized_objective(mu, rho, chi=0.0, nu=0.0, lam=0.0, xi_f=0.9) == pytest.approx(expected)
        vertex = penalized_objective([0.0, 1.0], rho, chi=0.0, nu=0.0, lam=0.0, xi_f=0.9)
        assert vertex == pytest.approx(1.0)
        assert vertex >= penalized_objective([1.0, 0.0], rho, chi=0.0, nu=0.0, lam=0.0, xi_f=0.9)

    def test_penalty_arithmetic(self):
        rho = np.array([1.0, 2.0])
        mu = np.array([0.5, 0.5])
        fairness = jain_index(mu, rho)
        xi_f = fairness + 0.1
        without = penalized_objective(mu, rho, 0.5, 0.01, 0.0, xi_f)
        with_penalty = penalized_objective(mu, rho, 0.5, 0.01, 3.0, xi_f)
        assert without - with_penalty == pytest.approx(3.0 * 0.01)


class TestGradient:
    def test_symmetric_point(self):
        grad = gradient_mu(np.full(4, 0.25), np.full(4, 2.0), chi=1.0, nu=0.01)
        np.testing.assert_allclose(grad, grad[0])

    def test_linear_regime(self):
        rho = np.array([1.0, 3.0, 7.0])
        grad = gradient_mu([0.2, 0.3, 0.5], rho, chi=0.0, nu=0.0)
        np.testing.assert_allclose(grad, np.log2(1 + rho) / 3.0)

    def test_matches_finite_differences(self, rng):
        for _ in range(100):
            k = int(rng.integers(2, 7))
            mu = random_simplex(rng, k)
            rho = rng.uniform(0.5, 20.0, k)
            chi = float(rng.uniform())
            lam = float(rng.choice([0.0, 10.0]))
            xi_f = float(rng.uniform(1.0 / k, 1.0))
            analytic = gradient_mu(mu, rho, chi, 0.01, lam, xi_f)
            numeric = central_difference(mu, rho, chi, 0.01, lam, xi_f)
            assert np.linalg.norm(analytic - numeric) <= 1e-5 * max(np.linalg.norm(analytic), 1e-3)

    def test_boundary_rejected(self):
        with pytest.raises(ValueError):
            gradient_mu([1.0, 0.0], [1.0, 1.0], chi=0.5, nu=0.01)


class TestProjectSimplex:
    def test_examples(self):
        np.testing.assert_allclose(project_simplex([0.2, 0.3, 0.5]), [0.2, 0.3, 0.5])
        np.testing.assert_allclose(project_simplex([2.0, 0.0]), [1.0, 0.0])
        np.testing.assert_allclose(project_simplex([0.6, 0.6]), [0.5, 0.5])

    def test_matches_grid_search_two_users(self, rng):
        grid = np.linspace(0.0, 1.0, 1001)
        points = np.stack([grid, 1 - grid], axis=1)
        for _ in range(50):
            v = rng.normal(0.0, 1.0, 2)
            best = points[np.argmin(np.sum((points - v) ** 2, axis=1))]
            assert np.max(np.abs(project_simplex(v) - best)) <= 2e-3

    def test_matches_grid_search_three_users(self, rng):
        a, b = np.meshgrid(np.linspace(0, 1, 1001), np.linspace(0, 1, 1001), indexing='ij')
        mask = a + b <= 1 + 1e-12
        points = np.stack([a[mask], b[mask], np.maximum(1 - a[mask] - b[mask], 0.0)], axis=1)
        for _ in range(10):
            v = rng.normal(0.0, 1.0, 3)
            best = points[np.argmin(np.sum((points - v) ** 2, axis=1))]
            assert np.max(np.abs(project_simplex(v) - best)) <= 2e-3

    def test_output_on_simplex(self, rng):
        for _ in range(500):
            result = project_simplex(rng.normal(0.0, 5.0, int(rng.integers(1, 10))))
            assert np.all(result >= 0)
            assert result.sum() == pytest.approx(1.0, abs=1e-12)


class TestHfroOptimize:
    def test_fairness_end_recovers_closed_form(self):
        rho = np.array([1.0, 3.0, 8.0, 0.5])
        config = SystemConfig.table_one(n_users=4, penalty_weight=100.0)
        mu, _ = hfro_optimize(rho, config, chi_path=[1.0])
        assert np.abs(mu - fairness_closed_form(rho)).sum() <= 0.05
        assert jain_index(mu, rho) >= 0.99

    def test_throughput_end_favors_strongest_user(self):
        config = SystemConfig.table_one(n_users=2, penalty_weight=1e-6, inner_iters=200)
        mu, _ = hfro_optimize([1.0, 10.0], config, chi_path=[0.0])
        assert int(np.argmax(mu)) == 1

    def test_every_iterate_on_simplex(self, rng):
        config = SystemConfig.table_one(n_users=4, inner_iters=20)
        _, trace = hfro_optimize(rng.uniform(0.5, 30.0, 4), config)
        assert len(trace) == config.tradeoff_steps * config.inner_iters
        for state in trace:
            assert np.all(state.mu >= 0)
            assert abs(state.mu.sum() - 1.0) <= 1e-12
            assert 0.25 - 1e-12 <= state.fairness <= 1.0 + 1e-12

    def test_objective_never_decreases_within_a_chi_step(self, rng):
        config = SystemConfig.table_one(n_users=3, inner_iters=30)
        _, trace = hfro_optimize(rng.uniform(0.5, 30.0, 3), config)
        for t in range(config.tradeoff_steps):
            values = [s.objective for s in trace if s.t == t]
            assert all(b >= a for a, b in zip(values, values[1:]))

    def test_rate_term_grows_along_path(self):
        config = SystemConfig.table_one(n_users=2, inner_iters=500)
        _, trace = hfro_optimize([1.0, 5.0], config)
        endpoints = path_endpoints(trace)
        assert [s.chi for s in endpoints] == pytest.approx(list(config.chi_path))
        rates = [s.sum_rate_term for s in endpoints]
        assert all(b >= a - 1e-9 for a, b in zip(rates, rates[1:]))

    def test_uniform_rho_stays_fair(self):
        config = SystemConfig.table_one(n_users=3, inner_iters=10)
        _, trace = hfro_optimize([4.0, 4.0, 4.0], config)
        for state in path_endpoints(trace):
            assert state.fairness == pytest.approx(1.0, abs=1e-9)

    def test_non_finite_sinr_aborts(self):
        config = SystemConfig.table_one(n_users=2)
        with pytest.raises(NonFiniteObjectiveError) as info:
            hfro_optimize([1.0, math.inf], config)
        assert isinstance(info.value.trace, list)

    def test_nonpositive_sinr_rejected(self):
        with pytest.raises(ValueError):
            hfro_optimize([1.0, 0.0], SystemConfig.table_one(n_users=2))
