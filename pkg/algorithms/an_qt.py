from typing import Tuple

import numpy as np

from const import FEASIBILITY_TOL
from models import Scenario, Solution, AuxStateII, FeasibilityReport
from algorithms.base_subproblem import BaseSubproblem, PassResult, nonhomogeneous_bound, resolve_zeta, clamp_kappa
from algorithms.beamform_qt import transform_quadratic
from algorithms.feasibility import sensing_gains, beamwidth_edges
from algorithms.nullspace import NullProjector
from utils.linalg import largest_eigenvalue

BISECTION_STEPS = 100


def update_z2(solution: Solution) -> np.ndarray:
    return solution.an.copy()


def _received(scenario: Scenario, solution: Solution) -> Tuple[np.ndarray, np.ndarray]:
    """(e_k, B^_k(n)) with the beams frozen."""
    gains = scenario.channels @ solution.beams
    e = np.diag(gains).copy()
    b_hat_vec = np.sum(np.abs(gains) ** 2, axis=1) + np.abs(scenario.channels @ solution.an_effective) ** 2 + scenario.noise_user
    return e, b_hat_vec


def update_y2(k: int, solution: Solution, scenario: Scenario) -> complex:
    e, b_hat_vec = _received(scenario, solution)
    return e[k] / b_hat_vec[k]


def _zeta2(k: int, y_t: np.ndarray, e: np.ndarray, b_hat_vec: np.ndarray, noise_k: float) -> Tuple[float, bool]:
    others = np.abs(np.delete(y_t, k)) ** 2
    bracket = (
        abs(e[k]) ** 2 * (abs(y_t[k]) ** 2 + others.sum())
        + noise_k * abs(y_t[k]) ** 2
        - 2 * np.real(np.conj(y_t[k]) * e[k])
    )
    q = float(transform_quadratic(np.asarray(y_t[k]), np.asarray(e[k]), np.asarray(b_hat_vec[k])))
    return resolve_zeta(float(bracket), q)


def update_zeta2(k: int, aux: AuxStateII, solution: Solution, scenario: Scenario) -> float:
    e, b_hat_vec = _received(scenario, solution)
    zeta, _ = _zeta2(k, aux.y_t, e, b_hat_vec, scenario.config.noise_user[k])
    return zeta


def build_d2(k: int, aux: AuxStateII, scenario: Scenario, projector: NullProjector) -> Tuple[np.ndarray, float]:
    """D~_k = mu~_k (1 + zeta~_k) |y~_k|^2 (P h_k^H)(h_k P), kappa~_k from its largest eigenvalue."""
    g = scenario.channels[k] @ projector.matrix
    weight = aux.mu_t[k] * (1 + aux.zeta_t[k]) * abs(aux.y_t[k]) ** 2
    d = weight * np.outer(g.conj(), g)
    d = (d + d.conj().T) / 2
    return d, clamp_kappa(scenario.config.kappa_margin * largest_eigenvalue(d))


def update_n(aux: AuxStateII, current_n: np.ndarray) -> np.ndarray:
    """n = (sum_k kappa~_k)^-1 sum_k (kappa~_k I - D~_k) z."""
    kappa_sum = float(np.sum(aux.kappa_t))
    if kappa_sum == 0:
        return np.array(current_n, dtype=complex)
    z = aux.z_shared
    accumulated = kappa_sum * z - np.einsum('kij,j->i', aux.d_mats_t, z)
    return accumulated / kappa_sum


def project_n(n: np.ndarray, solution: Solution, scenario: Scenario, projector: NullProjector) -> Tuple[np.ndarray, FeasibilityReport]:
    """
    Radial scaling of the AN vector: down to the residual power budget, then up
    (capped by the budget) to the smallest factor meeting every sensing floor.
    Beamwidth edges are only checked.
    """
    config = scenario.config
    budget = config.an_budget
    n = np.array(n, dtype=complex)
    n_eff = projector.apply(n)
    an_power = float(np.real(np.vdot(n_eff, n_eff)))
    scale = 1.0
    if an_power > budget:
        scale = np.sqrt(budget / an_power)

    floors = np.asarray(config.sensing_floor)
    beams_only = Solution(solution.beams, np.zeros_like(n), np.zeros_like(n))
    beam_part = sensing_gains(scenario, beams_only)
    an_part = np.abs(scenario.path_gain) ** 2 * np.abs(scenario.target_steering.conj().T @ n_eff) ** 2

    def meets_floors(s: float) -> bool:
        return bool(np.all(beam_part + s ** 2 * an_part >= floors))

    if not meets_floors(scale) and an_power > 0:
        max_scale = np.sqrt(budget / an_power)
        if meets_floors(max_scale):
            low, high = scale, max_scale
            for _ in range(BISECTION_STEPS):
                middle = (low + high) / 2
                if meets_floors(middle):
                    high = middle
                else:
                    low = middle
            scale = high
        else:
            scale = max_scale

    n = scale * n
    n_eff = scale * n_eff
    gains = beam_part + scale ** 2 * an_part
    margins = gains - floors

    scaled = Solution(solution.beams, n, n_eff)
    edges = beamwidth_edges(scenario)
    violations = []
    for side in range(2):
        edge_gain = sensing_gains(scenario, scaled, edges[:, side])
        violations.extend((j, side) for j in np.flatnonzero(edge_gain - floors / 2 > FEASIBILITY_TOL))

    report = FeasibilityReport(
        power_slack=float(budget - scale ** 2 * an_power),
        min_sensing_margin=float(margins.min()),
        scale=float(scale),
        infeasible_targets=[int(j) for j in np.flatnonzero(margins < -FEASIBILITY_TOL)],
        beamwidth_violations=sorted((int(j), side) for j, side in violations),
    )
    return n, report


def surrogate_fr(scenario: Scenario, solution: Solution, n: np.ndarray, aux: AuxStateII) -> float:
    """Inverse-free surrogate in the AN vector for fixed beams and auxiliaries."""
    channels = scenario.channels
    gains = channels @ solution.beams
    e = np.diag(gains)
    fixed_power = np.sum(np.abs(gains) ** 2, axis=1) + scenario.noise_user
    value = np.sum(aux.mu_t * (np.log2(1 + aux.zeta_t) - aux.zeta_t))
    value += np.sum(aux.mu_t * (1 + aux.zeta_t) * (2 * np.real(np.conj(aux.y_t) * e) - np.abs(aux.y_t) ** 2 * fixed_power))
    for k in range(channels.shape[0]):
        value -= nonhomogeneous_bound(n, aux.z_shared, aux.d_mats_t[k], aux.kappa_t[k])
    return float(value)


class ANQT(BaseSubproblem):
    """Artificial-noise block with the beams held fixed."""

    def build_aux(self, solution: Solution) -> AuxStateII:
        config = self.config
        e, b_hat_vec = _received(self.scenario, solution)
        y_t = e / b_hat_vec
        zeta_t = np.zeros(config.n_users)
        fallbacks = 0
        for k in range(config.n_users):
            zeta_t[k], fell_back = _zeta2(k, y_t, e, b_hat_vec, config.noise_user[k])
            fallbacks += fell_back

        aux = AuxStateII(
            y_t=y_t,
            zeta_t=zeta_t,
            z_shared=update_z2(solution),
            kappa_t=np.zeros(config.n_users),
            d_mats_t=np.zeros((config.n_users, config.n_tx, config.n_tx), dtype=complex),
            mu_t=self.mu.copy(),
            e=e,
            b_hat=b_hat_vec,
            zeta_fallbacks=fallbacks,
        )
        for k in range(config.n_users):
            aux.d_mats_t[k], aux.kappa_t[k] = build_d2(k, aux, self.scenario, self._projector)
        return aux

    def run_pass(self, solution: Solution) -> PassResult:
        aux = self.build_aux(solution)
        before = surrogate_fr(self.scenario, solution, solution.an, aux)
        n = update_n(aux, solution.an)
        after = surrogate_fr(self.scenario, solution, n, aux)
        n, report = project_n(n, solution, self.scenario, self._projector)
        return PassResult(
            solution=Solution(solution.beams.copy(), n, self.effective(n)),
            aux=aux,
            surrogate_before=before,
            surrogate_after=after,
            steps=[(before, after)],
            zeta_fallbacks=aux.zeta_fallbacks,
            report=report,
        )
