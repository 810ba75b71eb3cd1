from dataclasses import dataclass, field

import numpy as np


@dataclass
class Solution:
    beams: np.ndarray
    an: np.ndarray
    an_effective: np.ndarray

    def copy(self) -> 'Solution':
        return Solution(self.beams.copy(), self.an.copy(), self.an_effective.copy())

    @property
    def transmit_covariance(self) -> np.ndarray:
        """W~ = sum_k w_k w_k^H + n_eff n_eff^H."""
        return self.beams @ self.beams.conj().T + np.outer(self.an_effective, self.an_effective.conj())

    @classmethod
    def zeros(cls, n_tx: int, n_users: int) -> 'Solution':
        return cls(
            beams=np.zeros((n_tx, n_users), dtype=complex),
            an=np.zeros(n_tx, dtype=complex),
            an_effective=np.zeros(n_tx, dtype=complex),
        )


@dataclass
class RateReport:
    sinr_legit: np.ndarray
    snr_eve: np.ndarray
    secrecy_per_user: np.ndarray
    sum_secrecy: float
    sum_rate: float
    rates: np.ndarray = field(default=None)
