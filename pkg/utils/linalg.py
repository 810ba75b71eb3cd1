import numpy as np
from scipy.linalg import eigvalsh

from utils.rng import generator, complex_gaussian, POWER_ITER_STREAM

EXACT_EIG_MAX_DIM = 64
POWER_ITER_TOL = 1e-12
POWER_ITER_MAX = 500


def power_iteration(matrix: np.ndarray, tol: float = POWER_ITER_TOL, max_iters: int = POWER_ITER_MAX) -> float:
    """
    Dominant eigenvalue of a Hermitian PSD matrix via the Rayleigh quotient.

    Starts from a fixed-seed complex Gaussian draw; falls back to eigvalsh when
    the estimate is not positive for a nonzero matrix.
    """
    n = matrix.shape[0]
    v = complex_gaussian(generator(n, POWER_ITER_STREAM), n)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(max_iters):
        u = matrix @ v
        norm = np.linalg.norm(u)
        if norm == 0:
            break
        v = u / norm
        new_estimate = float(np.real(np.vdot(v, matrix @ v)))
        if abs(new_estimate - estimate) <= tol * max(1.0, abs(new_estimate)):
            return new_estimate
        estimate = new_estimate
    if estimate <= 0 and np.any(matrix):
        return float(eigvalsh(matrix)[-1])
    return estimate


def largest_eigenvalue(matrix: np.ndarray) -> float:
    if matrix.shape[0] <= EXACT_EIG_MAX_DIM:
        return float(eigvalsh(matrix)[-1])
    return power_iteration(matrix)


def is_hermitian(matrix: np.ndarray, atol: float = 1e-10) -> bool:
    return matrix.ndim == 2 and matrix.shape[0] == matrix.shape[1] and np.allclose(matrix, matrix.conj().T, atol=atol)
