from typing import Tuple

import numpy as np

from const import FEASIBILITY_TOL
from models import Scenario, Solution, AuxStateI
from algorithms.base_subproblem import (
    BaseSubproblem, PassResult, nonhomogeneous_bound, resolve_zeta, clamp_kappa,
)
from algorithms.feasibility import eaves_cap
from utils.linalg import largest_eigenvalue
from utils.logger import info_logger

PROJECTION_CYCLES = 8
ASCENT_TOL = 1e-10
BACKTRACK_STEPS = 6
MAX_MOMENTUM = 2.0 ** 10


def residual_b(scenario: Scenario, solution: Solution, k: int) -> float:
    """B_k: interference from the other beams plus AN leakage plus noise at user k."""
    h = scenario.channels[k]
    gains = np.abs(h @ solution.beams) ** 2
    return float(gains.sum() - gains[k] + abs(h @ solution.an_effective) ** 2 + scenario.config.noise_user[k])


def b_hat(scenario: Scenario, solution: Solution, k: int) -> float:
    """B^_k = |e_k|^2 + B_k, the total received power at user k."""
    return abs(scenario.channels[k] @ solution.beams[:, k]) ** 2 + residual_b(scenario, solution, k)


def update_z1(solution: Solution) -> np.ndarray:
    return solution.beams.copy()


def update_y1(e_k: complex, b_hat_k: float) -> complex:
    return e_k / b_hat_k


def transform_quadratic(y: np.ndarray, e: np.ndarray, b_hat_vec: np.ndarray) -> np.ndarray:
    """q_k = 2 Re{y_k* e_k} - |y_k|^2 B^_k, a lower bound on |e_k|^2 / B^_k tight at y_k = e_k / B^_k."""
    return 2 * np.real(np.conj(y) * e) - np.abs(y) ** 2 * b_hat_vec


def _zeta1(y_k: complex, e_k: complex, b_hat_k: float, an_leak_k: float, noise_k: float) -> Tuple[float, bool]:
    n_tilde = abs(y_k) ** 2 * an_leak_k
    printed = 1 + n_tilde + noise_k * abs(y_k) ** 2 - np.real(y_k * e_k)
    q = float(transform_quadratic(np.asarray(y_k), np.asarray(e_k), np.asarray(b_hat_k)))
    return resolve_zeta(float(printed), q)


def update_zeta1(k: int, y: complex, e: complex, solution: Solution, scenario: Scenario) -> float:
    an_leak = abs(scenario.channels[k] @ solution.an_effective) ** 2
    zeta, _ = _zeta1(y, e, b_hat(scenario, solution, k), an_leak, scenario.config.noise_user[k])
    return zeta


def coupling_weights(aux: AuxStateI, mu: np.ndarray) -> np.ndarray:
    """c_i = mu_i (1 + zeta_i) |y_i|^2."""
    return np.asarray(mu) * (1 + aux.zeta) * np.abs(aux.y) ** 2


def build_d1(scenario: Scenario, aux: AuxStateI, k: int, mu: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    D_k and kappa_k for the inverse-free bound on user k's beam.

    cross_user: D_k = sum_i c_i h_i^H h_i, so that sum_k w_k^H D_k w_k reproduces
    every user's interference-plus-signal term.
    as_printed: D_k = (sum_i c_i) h_k^H h_k.
    """
    weights = coupling_weights(aux, mu)
    channels = scenario.channels
    if scenario.config.interference_coupling == 'cross_user':
        d = channels.conj().T @ (weights[:, np.newaxis] * channels)
    else:
        h = channels[k]
        d = weights.sum() * np.outer(h.conj(), h)
    d = (d + d.conj().T) / 2
    kappa = clamp_kappa(scenario.config.kappa_margin * largest_eigenvalue(d))
    return d, kappa


def update_w(k: int, aux: AuxStateI, mu: np.ndarray, scenario: Scenario) -> np.ndarray:
    if aux.kappa[k] <= 0:
        raise ArithmeticError(f'kappa for user {k} must be positive')
    h = scenario.channels[k]
    z = aux.z[:, k]
    linear = mu[k] * (1 + aux.zeta[k]) * h.conj() * aux.y[k]
    return z + (linear - aux.d_mats[k] @ z) / aux.kappa[k]


def project_w(w_k: np.ndarray, scenario: Scenario, k: int, an_effective: np.ndarray) -> np.ndarray:
    """Radial scaling onto ||w_k||^2 <= P_k and every target's leakage cap, cycled until both hold."""
    power = scenario.config.per_user_power[k]
    cap = eaves_cap(scenario, an_effective)
    a = scenario.target_steering
    w = np.array(w_k, dtype=complex)
    for _ in range(PROJECTION_CYCLES):
        changed = False
        norm2 = float(np.real(np.vdot(w, w)))
        if norm2 > power:
            w *= np.sqrt(power / norm2)
            changed = True
        leakage = np.abs(a.conj().T @ w) ** 2
        ratios = np.where(leakage > cap, cap / np.where(leakage > 0, leakage, 1.0), 1.0)
        if np.any(ratios < 1):
            w *= np.sqrt(ratios.min())
            changed = True
        if not changed:
            break
    return w


def beam_feasible(w_k: np.ndarray, scenario: Scenario, k: int, an_effective: np.ndarray) -> bool:
    """Whether w_k meets its power budget and every leakage cap within FEASIBILITY_TOL."""
    power = scenario.config.per_user_power[k]
    if float(np.real(np.vdot(w_k, w_k))) > power + FEASIBILITY_TOL * max(1.0, power):
        return False
    cap = eaves_cap(scenario, an_effective)
    leakage = np.abs(scenario.target_steering.conj().T @ w_k) ** 2
    return bool(np.all(leakage <= cap + FEASIBILITY_TOL * np.maximum(1.0, cap)))


def surrogate_f(scenario: Scenario, beams: np.ndarray, an_effective: np.ndarray, aux: AuxStateI, mu: np.ndarray) -> float:
    """Inverse-free surrogate of the weighted sum rate; separable in the beams for fixed auxiliaries."""
    mu = np.asarray(mu)
    channels = scenario.channels
    e = np.einsum('kn,nk->k', channels, beams)
    fixed_power = np.abs(channels @ an_effective) ** 2 + scenario.noise_user
    value = np.sum(mu * (np.log2(1 + aux.zeta) - aux.zeta))
    value += np.sum(mu * (1 + aux.zeta) * (2 * np.real(np.conj(aux.y) * e) - np.abs(aux.y) ** 2 * fixed_power))
    for k in range(channels.shape[0]):
        value -= nonhomogeneous_bound(beams[:, k], aux.z[:, k], aux.d_mats[k], aux.kappa[k])
    return float(value)


def transform_objective(scenario: Scenario, solution: Solution, y: np.ndarray, zeta: np.ndarray, mu: np.ndarray) -> float:
    """sum_k mu_k [log2(1 + zeta_k) - zeta_k + (1 + zeta_k) q_k] for the given auxiliaries."""
    channels = scenario.channels
    e = np.einsum('kn,nk->k', channels, solution.beams)
    power = np.sum(np.abs(channels @ solution.beams) ** 2, axis=1)
    b_hat_vec = power + np.abs(channels @ solution.an_effective) ** 2 + scenario.noise_user
    q = transform_quadratic(y, e, b_hat_vec)
    return float(np.sum(np.asarray(mu) * (np.log2(1 + zeta) - zeta + (1 + zeta) * q)))


class BeamformQT(BaseSubproblem):
    """
    Beamformer block with the AN vector held fixed.

    A projected update that lowers the weighted rate of an already feasible beam
    is backtracked toward the current beam, or dropped. After each pass the
    beams are pushed further along the pass direction with a doubling momentum
    factor; the push is kept only when it raises the weighted rate.
    """

    def __init__(self, scenario: Scenario, projector, mu: np.ndarray):
        super().__init__(scenario, projector, mu)
        self._momentum = 1.0

    def reset(self):
        self._momentum = 1.0

    def build_aux(self, beams: np.ndarray, an_effective: np.ndarray) -> AuxStateI:
        config = self.config
        e, _, b_hat_vec = self.received_powers(beams, an_effective)
        y = e / b_hat_vec
        an_leak = np.abs(self.scenario.channels @ an_effective) ** 2
        zeta = np.zeros(config.n_users)
        fallbacks = 0
        for k in range(config.n_users):
            zeta[k], fell_back = _zeta1(y[k], e[k], b_hat_vec[k], an_leak[k], config.noise_user[k])
            fallbacks += fell_back

        aux = AuxStateI(
            y=y,
            zeta=zeta,
            z=beams.copy(),
            kappa=np.zeros(config.n_users),
            d_mats=np.zeros((config.n_users, config.n_tx, config.n_tx), dtype=complex),
            e=e,
            b_hat=b_hat_vec,
            zeta_fallbacks=fallbacks,
        )
        if config.interference_coupling == 'cross_user':
            d, kappa = build_d1(self.scenario, aux, 0, self.mu)
            aux.d_mats[:] = d
            aux.kappa[:] = kappa
        else:
            for k in range(config.n_users):
                aux.d_mats[k], aux.kappa[k] = build_d1(self.scenario, aux, k, self.mu)
        return aux

    def weighted_rate(self, beams: np.ndarray, an_effective: np.ndarray) -> float:
        e, residual, _ = self.received_powers(beams, an_effective)
        return float(np.dot(self.mu, np.log2(1 + np.abs(e) ** 2 / residual)))

    def _all_feasible(self, beams: np.ndarray, an_effective: np.ndarray) -> bool:
        return all(beam_feasible(beams[:, k], self.scenario, k, an_effective) for k in range(self.config.n_users))

    def _project_all(self, beams: np.ndarray, an_effective: np.ndarray) -> np.ndarray:
        return np.stack(
            [project_w(beams[:, k], self.scenario, k, an_effective) for k in range(self.config.n_users)],
            axis=1,
        )

    def _safeguard(self, beams: np.ndarray, k: int, candidate: np.ndarray, an_effective: np.ndarray) -> np.ndarray:
        current = beams[:, k].copy()
        if not beam_feasible(current, self.scenario, k, an_effective):
            return candidate
        baseline = self.weighted_rate(beams, an_effective)
        trial = beams.copy()
        step = 1.0
        for _ in range(BACKTRACK_STEPS + 1):
            trial[:, k] = current + step * (candidate - current)
            if self.weighted_rate(trial, an_effective) >= baseline:
                return trial[:, k].copy()
            step /= 2
        return current

    def _tolerance(self, value: float) -> float:
        return ASCENT_TOL * max(1.0, abs(value))

    def _gauss_seidel_pass(self, solution: Solution) -> PassResult:
        beams = solution.beams.copy()
        an_effective = solution.an_effective
        steps = []
        fallbacks = 0
        aux = None
        for k in range(self.config.n_users):
            aux = self.build_aux(beams, an_effective)
            fallbacks += aux.zeta_fallbacks
            before = surrogate_f(self.scenario, beams, an_effective, aux, self.mu)
            updated = beams.copy()
            updated[:, k] = update_w(k, aux, self.mu, self.scenario)
            after = surrogate_f(self.scenario, updated, an_effective, aux, self.mu)
            steps.append((before, after))
            candidate = project_w(updated[:, k], self.scenario, k, an_effective)
            beams[:, k] = self._safeguard(beams, k, candidate, an_effective)

        return PassResult(
            solution=Solution(beams, solution.an.copy(), an_effective.copy()),
            aux=aux,
            surrogate_before=steps[0][0],
            surrogate_after=steps[-1][1],
            steps=steps,
            zeta_fallbacks=fallbacks,
        )

    def _jacobi_pass(self, solution: Solution) -> PassResult:
        an_effective = solution.an_effective
        aux = self.build_aux(solution.beams, an_effective)
        updated = np.stack([update_w(k, aux, self.mu, self.scenario) for k in range(self.config.n_users)], axis=1)
        before = surrogate_f(self.scenario, solution.beams, an_effective, aux, self.mu)
        after = surrogate_f(self.scenario, updated, an_effective, aux, self.mu)
        projected = self._project_all(updated, an_effective)
        projected_value = surrogate_f(self.scenario, projected, an_effective, aux, self.mu)
        rejected = projected_value < before - self._tolerance(before)
        if not rejected and self._all_feasible(solution.beams, an_effective):
            rejected = self.weighted_rate(projected, an_effective) < self.weighted_rate(solution.beams, an_effective)
        return PassResult(
            solution=Solution(projected, solution.an.copy(), an_effective.copy()),
            aux=aux,
            surrogate_before=before,
            surrogate_after=after,
            steps=[(before, after)],
            zeta_fallbacks=aux.zeta_fallbacks,
            jacobi_rejected=bool(rejected),
        )

    def _extrapolate(self, start: Solution, result: PassResult) -> PassResult:
        an_effective = start.an_effective
        if not self.config.extrapolate or not self._all_feasible(start.beams, an_effective):
            return result
        beams = result.solution.beams
        pushed = self._project_all(beams + self._momentum * (beams - start.beams), an_effective)
        if self.weighted_rate(pushed, an_effective) > self.weighted_rate(beams, an_effective):
            self._momentum = min(2 * self._momentum, MAX_MOMENTUM)
            result.solution = Solution(pushed, result.solution.an, result.solution.an_effective)
            result.extrapolated = True
        else:
            self._momentum = 1.0
        return result

    def _plain_pass(self, solution: Solution) -> PassResult:
        if self.config.update_order == 'jacobi':
            result = self._jacobi_pass(solution)
            if not result.jacobi_rejected:
                return result
            info_logger.warning(f'jacobi beam update rejected for scenario seed={self.scenario.seed}, using gauss-seidel')
            fallback = self._gauss_seidel_pass(solution)
            fallback.jacobi_rejected = True
            fallback.zeta_fallbacks += result.zeta_fallbacks
            return fallback
        return self._gauss_seidel_pass(solution)

    def run_pass(self, solution: Solution) -> PassResult:
        return self._extrapolate(solution, self._plain_pass(solution))
