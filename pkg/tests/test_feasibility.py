import math

import numpy as np
import pytest

from algorithms.feasibility import beam_leakage, beamwidth_edges, eaves_cap, evaluate_margins, sensing_gains
from algorithms.metrics import beam_gain
from algorithms.nullspace import null_projector
from algorithms.solver import initialize
from models import ConstraintMargins, SystemConfig
from tests.conftest import make_scenario, make_solution
from utils.rng import complex_gaussian
from utils.scenario_factory import sample_scenario, steering_vector


class TestEavesCap:
    def test_noise_only_value(self):
        scenario = make_scenario([[1, 0]], eaves_rate_cap=(1.0,), noise_eve=0.5)
        np.testing.assert_allclose(eaves_cap(scenario, np.zeros(2)), [0.5])

    def test_noise_leakage_raises_cap(self, small_scenario, rng):
        projector = null_projector(small_scenario.channels)
        an = projector.apply(complex_gaussian(rng, 8))
        assert eaves_cap(small_scenario, 2 * an)[0] > eaves_cap(small_scenario, an)[0] > eaves_cap(small_scenario, 0 * an)[0]

    def test_silent_target_has_no_cap(self):
        scenario = make_scenario([[1, 0]], target_angles_deg=(-20.0, 20.0), path_gain=(0.0, 1.0),
                                 eaves_rate_cap=(0.1, 0.1), sensing_floor=(2.0, 2.0))
        cap = eaves_cap(scenario, np.zeros(2))
        assert math.isinf(cap[0]) and math.isfinite(cap[1])

    def test_cap_matches_rate_limit(self, small_scenario, rng):
        an = null_projector(small_scenario.channels).apply(complex_gaussian(rng, 8))
        cap = eaves_cap(small_scenario, an)[0]
        alpha2 = abs(small_scenario.config.path_gain[0]) ** 2
        leak = abs(np.vdot(small_scenario.target_steering[:, 0], an)) ** 2
        snr = alpha2 * cap / (alpha2 * leak + small_scenario.config.noise_eve)
        assert math.log2(1 + snr) == pytest.approx(small_scenario.config.eaves_rate_cap[0])


class TestMargins:
    def test_zero_solution(self, table_scenario):
        margins = evaluate_margins(table_scenario, make_solution(np.zeros((16, 4))))
        config = table_scenario.config
        np.testing.assert_allclose(margins.sensing_margin, -np.asarray(config.sensing_floor))
        np.testing.assert_allclose(margins.per_user_power_slack, config.per_user_power)
        assert margins.total_power_slack == pytest.approx(config.an_budget)
        assert margins.power_feasible and margins.eaves_feasible
        assert not margins.sensing_feasible and not margins.feasible

    def test_initialization_uses_full_power(self):
        config = SystemConfig.table_one(eaves_rate_cap=(20.0,))
        scenario = sample_scenario(config, 2)
        margins = evaluate_margins(scenario, initialize(scenario))
        np.testing.assert_allclose(margins.per_user_power_slack, 0.0, atol=1e-9)
        assert margins.total_power_slack == pytest.approx(0.0, abs=1e-9)

    def test_synthetic_beam_meets_floor_exactly(self):
        scenario = make_scenario(np.eye(16)[:1], target_angles_deg=(30.0,))
        floor = scenario.config.sensing_floor[0]
        beam = steering_vector(math.radians(30), 16) * math.sqrt(floor) / 16
        margins = evaluate_margins(scenario, make_solution(beam[:, None]))
        assert margins.sensing_margin[0] == pytest.approx(0.0, abs=1e-12)
        assert margins.sensing_feasible

    def test_shapes(self, rng):
        scenario = sample_scenario(SystemConfig.table_one(n_tx=8, n_users=3, n_targets=2), 1)
        margins = evaluate_margins(scenario, make_solution(complex_gaussian(rng, (8, 3))))
        assert margins.per_user_power_slack.shape == (3,)
        assert margins.eaves_cap_slack.shape == (3, 2)
        assert margins.sensing_margin.shape == (2,)
        assert margins.beamwidth_excess.shape == (2, 2)

    def test_sensing_gain_agrees_with_beam_gain(self, table_scenario, rng):
        solution = make_solution(complex_gaussian(rng, (16, 4)), complex_gaussian(rng, 16))
        theta = table_scenario.config.target_angles[0]
        assert sensing_gains(table_scenario, solution)[0] == pytest.approx(beam_gain(solution, table_scenario, theta))

    def test_margins_are_continuous(self, table_scenario, rng):
        beams = complex_gaussian(rng, (16, 4))
        an = null_projector(table_scenario.channels).apply(complex_gaussian(rng, 16))
        base = evaluate_margins(table_scenario, make_solution(beams, an))
        eps = 1e-6
        moved = evaluate_margins(
            table_scenario,
            make_solution(beams + eps * complex_gaussian(rng, (16, 4)), an + eps * complex_gaussian(rng, 16)),
        )
        for name in ('per_user_power_slack', 'eaves_cap_slack', 'sensing_margin', 'beamwidth_excess'):
            change = np.max(np.abs(getattr(moved, name) - getattr(base, name)))
            assert change <= 1e-3, name
        assert abs(moved.total_power_slack - base.total_power_slack) <= 1e-3

    def test_beamwidth_does_not_gate(self):
        margins = ConstraintMargins(
            per_user_power_slack=np.array([0.0]),
            total_power_slack=0.0,
            eaves_cap_slack=np.array([[0.1]]),
            sensing_margin=np.array([0.5]),
            beamwidth_excess=np.array([[3.0, 4.0]]),
        )
        assert margins.feasible
        assert margins.beamwidth_violations == 2

    def test_leakage_matrix(self, small_scenario, rng):
        beams = complex_gaussian(rng, (8, 2))
        leakage = beam_leakage(small_scenario, beams)
        a = small_scenario.target_steering[:, 0]
        assert leakage[1, 0] == pytest.approx(abs(np.vdot(a, beams[:, 1])) ** 2)


class TestBeamwidthEdges:
    def test_edges_are_clipped(self):
        scenario = make_scenario([[1, 0]], target_angles_deg=(85.0,), beamwidth_half_deg=10.0)
        edges = beamwidth_edges(scenario)
        assert edges[0, 0] == pytest.approx(math.radians(75))
        assert edges[0, 1] == pytest.approx(math.pi / 2)
