import math

import numpy as np

from models import Scenario, SystemConfig
from utils.rng import generator, complex_gaussian, CHANNEL_STREAM


class AngleDomainError(ValueError):
    pass


def _check_angle(theta: float):
    if abs(theta) > math.pi / 2 + 1e-12:
        raise AngleDomainError(f'angle {theta} rad lies outside [-pi/2, pi/2]')


def steering_vector(theta: float, n_tx: int, spacing_ratio: float = 0.5) -> np.ndarray:
    _check_angle(theta)
    return np.exp(1j * 2 * np.pi * spacing_ratio * np.arange(n_tx) * np.sin(theta))


def steering_matrix(thetas, n_tx: int, spacing_ratio: float = 0.5) -> np.ndarray:
    """Columns a(theta) for every angle in `thetas`."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if np.any(np.abs(thetas) > math.pi / 2 + 1e-12):
        raise AngleDomainError('angles must lie in [-pi/2, pi/2]')
    return np.exp(1j * 2 * np.pi * spacing_ratio * np.outer(np.arange(n_tx), np.sin(thetas)))


def sample_scenario(config: SystemConfig, seed: int) -> Scenario:
    rng = generator(seed, CHANNEL_STREAM)
    channels = complex_gaussian(rng, (config.n_users, config.n_tx))
    return Scenario(
        config=config,
        channels=channels,
        target_steering=steering_matrix(config.target_angles, config.n_tx, config.spacing_ratio),
        seed=seed,
    )


class ScenarioFactory:
    """Builds scenarios for a config, resampling degenerate channel draws."""

    MAX_RESAMPLES = 16

    def __init__(self, config: SystemConfig):
        self._config = config

    @property
    def config(self) -> SystemConfig:
        return self._config

    def get_scenario(self, seed: int) -> Scenario:
        from algorithms.nullspace import null_projector, RankDeficientChannelError

        for attempt in range(self.MAX_RESAMPLES):
            scenario = sample_scenario(self._config, seed + attempt)
            try:
                null_projector(scenario.channels)
                return scenario
            except RankDeficientChannelError:
                continue
        raise RankDeficientChannelError(0.0)
