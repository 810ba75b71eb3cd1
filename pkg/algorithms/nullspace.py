from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, svdvals

from utils.linalg import is_hermitian

RANK_TOL = 1e-10


class RankDeficientChannelError(ValueError):
    def __init__(self, ratio: float):
        super().__init__(f'channel matrix is rank deficient (singular value ratio {ratio:.3e})')
        self.ratio = ratio


@dataclass(frozen=True, eq=False)
class NullProjector:
    matrix: np.ndarray
    source_rank: int

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.matrix @ vector


def null_projector(channels: np.ndarray) -> NullProjector:
    """P_perp = I - H^H (H H^H)^-1 H via a Cholesky solve on the K x K Gram matrix."""
    k, n_tx = channels.shape
    singular = svdvals(channels)
    ratio = float(singular[-1] / singular[0]) if singular[0] > 0 else 0.0
    if k > n_tx or ratio <= RANK_TOL:
        raise RankDeficientChannelError(ratio)

    gram = channels @ channels.conj().T
    factor = cho_factor(gram)
    matrix = np.eye(n_tx, dtype=complex) - channels.conj().T @ cho_solve(factor, channels)
    matrix = (matrix + matrix.conj().T) / 2
    return NullProjector(matrix=matrix, source_rank=k)


def effective_noise(projector: NullProjector, raw: np.ndarray) -> np.ndarray:
    return projector.matrix @ raw


def effective_covariance(projector: NullProjector, raw_cov: np.ndarray) -> np.ndarray:
    if not is_hermitian(raw_cov):
        raise ValueError('raw_cov must be Hermitian')
    result = projector.matrix @ raw_cov @ projector.matrix.conj().T
    return (result + result.conj().T) / 2
