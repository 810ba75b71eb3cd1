from dataclasses import dataclass

import numpy as np

from .system_config import SystemConfig


@dataclass(frozen=True, eq=False)
class Scenario:
    """One channel realization: rows of `channels` are h_k, columns of `target_steering` are a(theta_j)."""
    config: SystemConfig
    channels: np.ndarray
    target_steering: np.ndarray
    seed: int

    def __post_init__(self):
        k, n_tx, j = self.config.n_users, self.config.n_tx, self.config.n_targets
        if self.channels.shape != (k, n_tx):
            raise ValueError(f'channels must be {k}x{n_tx}, got {self.channels.shape}')
        if self.target_steering.shape != (n_tx, j):
            raise ValueError(f'target_steering must be {n_tx}x{j}, got {self.target_steering.shape}')
        self.channels.setflags(write=False)
        self.target_steering.setflags(write=False)

    @property
    def path_gain(self) -> np.ndarray:
        return np.asarray(self.config.path_gain, dtype=complex)

    @property
    def noise_user(self) -> np.ndarray:
        return np.asarray(self.config.noise_user, dtype=float)

    @property
    def per_user_power(self) -> np.ndarray:
        return np.asarray(self.config.per_user_power, dtype=float)
