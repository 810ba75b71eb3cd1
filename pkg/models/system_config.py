import math
from dataclasses import dataclass, replace
from typing import Sequence, Tuple

import numpy as np

UPDATE_ORDERS = ('gauss_seidel', 'jacobi')
INTERFERENCE_COUPLINGS = ('cross_user', 'as_printed')


class ConfigError(ValueError):
    pass


def _as_tuple(values, cast) -> tuple:
    if np.isscalar(values):
        return (cast(values),)
    return tuple(cast(_) for _ in values)


@dataclass(frozen=True)
class SystemConfig:
    """
    Scalar parameters of one problem instance.

    Powers and noise levels share one linear scale. Angles are radians; the
    JSON loader converts from degrees.
    """
    n_tx: int
    n_users: int
    n_targets: int
    per_user_power: Tuple[float, ...]
    total_power: float
    noise_user: Tuple[float, ...]
    noise_eve: float
    target_angles: Tuple[float, ...]
    beamwidth_half: float
    eaves_rate_cap: Tuple[float, ...]
    sensing_floor: Tuple[float, ...]
    path_gain: Tuple[complex, ...]
    fairness_floor: float = 0.5
    entropy_weight: float = 0.01
    penalty_weight: float = 10.0
    tradeoff_steps: int = 11
    inner_iters: int = 50
    trust_rate: float = 0.5
    step_size: float = 0.05
    spacing_ratio: float = 0.5
    kappa_margin: float = 1.0 + 1e-9
    conv_tol: float = 1e-6
    max_outer_iters: int = 500
    update_order: str = 'gauss_seidel'
    interference_coupling: str = 'cross_user'
    extrapolate: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'per_user_power', _as_tuple(self.per_user_power, float))
        object.__setattr__(self, 'noise_user', _as_tuple(self.noise_user, float))
        object.__setattr__(self, 'target_angles', _as_tuple(self.target_angles, float))
        object.__setattr__(self, 'eaves_rate_cap', _as_tuple(self.eaves_rate_cap, float))
        object.__setattr__(self, 'sensing_floor', _as_tuple(self.sensing_floor, float))
        object.__setattr__(self, 'path_gain', _as_tuple(self.path_gain, complex))
        self._validate()

    def _validate(self):
        issues = []
        for name in ('n_tx', 'n_users', 'n_targets', 'tradeoff_steps', 'inner_iters', 'max_outer_iters'):
            if int(getattr(self, name)) < 1:
                issues.append(f'{name} must be a positive integer')
        k, j = self.n_users, self.n_targets
        for name, size in (
                ('per_user_power', k),
                ('noise_user', k),
                ('target_angles', j),
                ('eaves_rate_cap', j),
                ('sensing_floor', j),
                ('path_gain', j),
        ):
            if len(getattr(self, name)) != size:
                issues.append(f'{name} must have {size} entries, got {len(getattr(self, name))}')

        if any(p < 0 for p in self.per_user_power) or self.total_power < 0:
            issues.append('powers must be nonnegative')
        if sum(self.per_user_power) > self.total_power * (1 + 1e-12):
            issues.append(
                f'sum of per_user_power ({sum(self.per_user_power)}) exceeds total_power ({self.total_power})'
            )
        if any(s <= 0 for s in self.noise_user) or self.noise_eve <= 0:
            issues.append('noise powers must be positive')
        if any(abs(t) > math.pi / 2 + 1e-12 for t in self.target_angles):
            issues.append('target angles must lie in [-pi/2, pi/2]')
        if self.beamwidth_half < 0:
            issues.append('beamwidth_half must be nonnegative')
        if any(b < 0 for b in self.eaves_rate_cap) or any(e < 0 for e in self.sensing_floor):
            issues.append('eaves_rate_cap and sensing_floor must be nonnegative')

        # K = 1 makes the Jain index identically 1, so any positive floor is harmless.
        lower = 1.0 / k if k > 1 else 0.0
        if not (lower < self.fairness_floor <= 1.0):
            issues.append(f'fairness_floor must lie in ({lower:.4g}, 1]')
        if self.entropy_weight <= 0 or self.penalty_weight <= 0:
            issues.append('entropy_weight and penalty_weight must be positive')
        if not (0 < self.trust_rate <= 1):
            issues.append('trust_rate must lie in (0, 1]')
        if self.step_size <= 0 or self.spacing_ratio <= 0 or self.conv_tol <= 0:
            issues.append('step_size, spacing_ratio and conv_tol must be positive')
        if self.kappa_margin < 1:
            issues.append('kappa_margin must be at least 1')
        if self.update_order not in UPDATE_ORDERS:
            issues.append(f'update_order must be one of {UPDATE_ORDERS}')
        if self.interference_coupling not in INTERFERENCE_COUPLINGS:
            issues.append(f'interference_coupling must be one of {INTERFERENCE_COUPLINGS}')
        if not isinstance(self.extrapolate, bool):
            issues.append('extrapolate must be a boolean')

        if issues:
            raise ConfigError('; '.join(issues))

    @property
    def an_budget(self) -> float:
        """Power left for artificial noise, P_A minus the per-user budgets."""
        return max(self.total_power - sum(self.per_user_power), 0.0)

    @property
    def chi_path(self) -> np.ndarray:
        return np.linspace(1.0, 0.0, self.tradeoff_steps) if self.tradeoff_steps > 1 else np.array([1.0])

    def with_overrides(self, **changes) -> 'SystemConfig':
        return replace(self, **changes)

    def with_snr_db(self, snr_db: float, reference_power: float = 1.0) -> 'SystemConfig':
        noise = reference_power * 10 ** (-snr_db / 10)
        return replace(self, noise_user=(noise,) * self.n_users, noise_eve=noise)

    @classmethod
    def table_one(
            cls,
            n_tx: int = 16,
            n_users: int = 4,
            n_targets: int = 1,
            snr_db: float = 20.0,
            total_power: float = 100.0,
            beamwidth_half_deg: float = 10.0,
            target_angles_deg: Sequence[float] = None,
            **overrides,
    ) -> 'SystemConfig':
        if target_angles_deg is None:
            target_angles_deg = default_target_angles_deg(n_targets)
        noise = 10 ** (-snr_db / 10)
        params = dict(
            n_tx=n_tx,
            n_users=n_users,
            n_targets=n_targets,
            per_user_power=(total_power / (2 * n_users),) * n_users,
            total_power=total_power,
            noise_user=(noise,) * n_users,
            noise_eve=noise,
            target_angles=tuple(math.radians(_) for _ in target_angles_deg),
            beamwidth_half=math.radians(beamwidth_half_deg),
            eaves_rate_cap=(0.1,) * n_targets,
            sensing_floor=(2.0,) * n_targets,
            path_gain=(1.0,) * n_targets,
            fairness_floor=default_fairness_floor(n_users),
            entropy_weight=0.01,
        )
        params.update(overrides)
        return cls(**params)


def default_target_angles_deg(n_targets: int) -> Tuple[float, ...]:
    if n_targets == 1:
        return (30.0,)
    if n_targets == 2:
        return (-30.0, 30.0)
    return tuple(float(_) for _ in np.linspace(-60.0, 60.0, n_targets))


def default_fairness_floor(n_users: int) -> float:
    """0.5 where that exceeds 1/K, otherwise midway between 1/K and 1."""
    if n_users == 1:
        return 1.0
    return 0.5 if 0.5 > 1.0 / n_users else (1.0 + 1.0 / n_users) / 2
