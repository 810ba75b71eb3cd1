from dataclasses import dataclass

import numpy as np


@dataclass
class AuxStateI:
    """Beamformer-block auxiliaries. `z` is N_t x K with z_k in column k; `d_mats` is K x N_t x N_t."""
    y: np.ndarray
    zeta: np.ndarray
    z: np.ndarray
    kappa: np.ndarray
    d_mats: np.ndarray
    e: np.ndarray
    b_hat: np.ndarray
    zeta_fallbacks: int = 0


@dataclass
class AuxStateII:
    y_t: np.ndarray
    zeta_t: np.ndarray
    z_shared: np.ndarray
    kappa_t: np.ndarray
    d_mats_t: np.ndarray
    mu_t: np.ndarray
    e: np.ndarray
    b_hat: np.ndarray
    zeta_fallbacks: int = 0
