import os
import sys
import tempfile

import numpy as np
import pytest

_SANDBOX = tempfile.mkdtemp(prefix='isac-tests-')
os.environ.setdefault('ISAC_LOG_DIR', os.path.join(_SANDBOX, 'logs'))
os.environ.setdefault('ISAC_CACHE_DIR', os.path.join(_SANDBOX, 'cache'))
os.environ.setdefault('ISAC_OUTPUT_DIR', os.path.join(_SANDBOX, 'results'))

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models import Scenario, Solution, SystemConfig  # noqa: E402
from utils.rng import complex_gaussian  # noqa: E402
from utils.scenario_factory import sample_scenario, steering_matrix  # noqa: E402


def make_scenario(channels, target_angles_deg=(30.0,), **overrides) -> Scenario:
    """Scenario with hand-picked channels and a table-one config sized to them."""
    channels = np.atleast_2d(np.asarray(channels, dtype=complex))
    k, n_tx = channels.shape
    config = SystemConfig.table_one(
        n_tx=n_tx,
        n_users=k,
        n_targets=len(target_angles_deg),
        target_angles_deg=target_angles_deg,
        **overrides,
    )
    return Scenario(
        config=config,
        channels=channels.copy(),
        target_steering=steering_matrix(config.target_angles, n_tx, config.spacing_ratio),
        seed=0,
    )


def make_solution(beams, an_effective=None, an=None) -> Solution:
    beams = np.atleast_2d(np.asarray(beams, dtype=complex))
    n_tx = beams.shape[0]
    an_effective = np.zeros(n_tx, dtype=complex) if an_effective is None else np.asarray(an_effective, dtype=complex)
    an = an_effective.copy() if an is None else np.asarray(an, dtype=complex)
    return Solution(beams=beams, an=an, an_effective=an_effective)


def random_simplex(rng, k) -> np.ndarray:
    mu = rng.uniform(0.05, 1.0, k)
    return mu / mu.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def small_config():
    return SystemConfig.table_one(n_tx=8, n_users=2, n_targets=1)


@pytest.fixture
def table_config():
    return SystemConfig.table_one()


@pytest.fixture
def small_scenario(small_config):
    return sample_scenario(small_config, seed=7)


@pytest.fixture
def table_scenario(table_config):
    return sample_scenario(table_config, seed=11)


@pytest.fixture
def random_solution(rng):
    def build(scenario, an_scale=1.0):
        config = scenario.config
        beams = complex_gaussian(rng, (config.n_tx, config.n_users))
        an = an_scale * complex_gaussian(rng, config.n_tx)
        return beams, an
    return build
