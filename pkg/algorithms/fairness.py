from typing import List, Tuple

import numpy as np

from models import SystemConfig, FairnessState
from algorithms.metrics import jain_index, entropy
from utils.logger import info_logger

INTERIOR_FLOOR = 1e-12
MAX_HALVINGS = 20


class NonFiniteObjectiveError(ArithmeticError):
    def __init__(self, message: str, trace: List[FairnessState]):
        super().__init__(message)
        self.trace = trace


def _check_rho(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if rho.size == 0 or np.any(~(rho > 0)):
        raise ValueError(f'SINR values must be positive, got {rho}')
    return rho


def normalization_g(rho) -> float:
    rho = _check_rho(rho)
    return float(1.0 / np.max(np.log2(1 + rho)))


def fairness_closed_form(rho) -> np.ndarray:
    inverse = 1.0 / _check_rho(rho)
    return inverse / inverse.sum()


def penalized_objective(mu, rho, chi: float, nu: float, lam: float, xi_f: float) -> float:
    mu = np.asarray(mu, dtype=float)
    rho = _check_rho(rho)
    rate_term = normalization_g(rho) * float(np.dot(mu, np.log2(1 + rho)))
    fairness = jain_index(mu, rho)
    shortfall = max(0.0, xi_f - fairness)
    return (1 - chi) * rate_term + chi * fairness - nu * entropy(mu) - lam * shortfall ** 2


def fairness_gradient(mu: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """dF/dmu_k of the Jain index F = S^2 / (K Q), S = mu.r, Q = ||mu o r||^2."""
    k = mu.size
    s = float(np.dot(mu, rho))
    q = float(np.sum((mu * rho) ** 2))
    return 2 * s * rho / (k * q) - 2 * s ** 2 * mu * rho ** 2 / (k * q ** 2)


def gradient_mu(mu, rho, chi: float, nu: float, lam: float = 0.0, xi_f: float = 0.0) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    rho = _check_rho(rho)
    if np.any(mu <= 0):
        raise ValueError('gradient_mu requires an interior point (all mu > 0)')

    d_fair = fairness_gradient(mu, rho)
    grad = (1 - chi) * normalization_g(rho) * np.log2(1 + rho) + chi * d_fair + nu * (1 + np.log(mu))
    shortfall = max(0.0, xi_f - jain_index(mu, rho))
    if lam > 0 and shortfall > 0:
        grad = grad + 2 * lam * shortfall * d_fair
    return grad


def project_simplex(v) -> np.ndarray:
    """Euclidean projection onto {mu >= 0, sum(mu) = 1} by sort-and-threshold."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1
    index = np.arange(1, v.size + 1)
    rho = index[u - cumulative / index > 0][-1]
    theta = cumulative[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def _to_interior(mu: np.ndarray) -> np.ndarray:
    mu = np.maximum(mu, INTERIOR_FLOOR)
    return mu / mu.sum()


def hfro_optimize(rho, config: SystemConfig, chi_path=None) -> Tuple[np.ndarray, List[FairnessState]]:
    """
    Projected gradient ascent on the penalized fairness-rate objective along a
    chi path from pure fairness to pure throughput.

    Each inner step takes mu + alpha * grad, projects onto the simplex and blends
    with the step's starting point using the trust rate. The step is halved while
    the objective would decrease; after MAX_HALVINGS the starting point is kept.
    Returns the final weights and one FairnessState per inner step.
    """
    rho = _check_rho(rho)
    chi_path = config.chi_path if chi_path is None else np.asarray(chi_path, dtype=float)
    nu, lam, xi_f = config.entropy_weight, config.penalty_weight, config.fairness_floor
    g_norm = normalization_g(rho)
    rate_weights = np.log2(1 + rho)

    mu = _to_interior(fairness_closed_form(rho))
    trace = []
    for t, chi in enumerate(chi_path):
        chi = float(chi)
        objective = penalized_objective(mu, rho, chi, nu, lam, xi_f)
        for step in range(config.inner_iters):
            mu_old = mu
            grad = gradient_mu(mu_old, rho, chi, nu, lam, xi_f)
            if not (np.isfinite(objective) and np.all(np.isfinite(grad))):
                info_logger.warning(f'fairness optimizer aborted at t={t} step={step}: non-finite objective')
                raise NonFiniteObjectiveError(f'non-finite objective at t={t}, step={step}', trace)
            alpha = config.step_size
            for _ in range(MAX_HALVINGS + 1):
                candidate = project_simplex(mu_old + alpha * grad)
                candidate = _to_interior((1 - config.trust_rate) * mu_old + config.trust_rate * candidate)
                candidate_objective = penalized_objective(candidate, rho, chi, nu, lam, xi_f)
                if candidate_objective >= objective:
                    mu, objective = candidate, candidate_objective
                    break
                alpha /= 2

            state = FairnessState(
                t=t,
                step=step,
                mu=mu.copy(),
                chi=chi,
                g_norm=g_norm,
                objective=objective,
                fairness=jain_index(mu, rho),
                entropy_val=entropy(mu),
                sum_rate_term=float(np.dot(mu, rate_weights)),
            )
            trace.append(state)

    return mu, trace


def path_endpoints(trace: List[FairnessState]) -> List[FairnessState]:
    """The last state of every chi step."""
    finals = {}
    for state in trace:
        finals[state.t] = state
    return [finals[t] for t in sorted(finals)]
