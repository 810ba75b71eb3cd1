import numpy as np

from models import Scenario, Solution, RateReport
from utils.scenario_factory import steering_vector, steering_matrix


class UndefinedFairnessError(ValueError):
    pass


def _interference(scenario: Scenario, solution: Solution) -> np.ndarray:
    """|h_k w_i|^2 for every (k, i)."""
    return np.abs(scenario.channels @ solution.beams) ** 2


def sinr_vector(scenario: Scenario, solution: Solution) -> np.ndarray:
    gains = _interference(scenario, solution)
    signal = np.diag(gains)
    an_term = np.abs(scenario.channels @ solution.an_effective) ** 2
    denominator = gains.sum(axis=1) - signal + an_term + scenario.noise_user
    return signal / denominator


def sinr_legitimate(scenario: Scenario, solution: Solution, k: int) -> float:
    h = scenario.channels[k]
    gains = np.abs(h @ solution.beams) ** 2
    interference = gains.sum() - gains[k]
    an_term = abs(h @ solution.an_effective) ** 2
    return float(gains[k] / (interference + an_term + scenario.config.noise_user[k]))


def snr_matrix(scenario: Scenario, solution: Solution) -> np.ndarray:
    """K x J eavesdropper SNRs."""
    alpha2 = np.abs(scenario.path_gain) ** 2
    a = scenario.target_steering
    leak = np.abs(a.conj().T @ solution.beams).T ** 2
    an_leak = np.abs(a.conj().T @ solution.an_effective) ** 2
    return alpha2 * leak / (alpha2 * an_leak + scenario.config.noise_eve)


def snr_eavesdropper(scenario: Scenario, solution: Solution, k: int, j: int) -> float:
    alpha2 = abs(scenario.config.path_gain[j]) ** 2
    a = scenario.target_steering[:, j]
    signal = abs(np.vdot(a, solution.beams[:, k])) ** 2
    an_leak = abs(np.vdot(a, solution.an_effective)) ** 2
    return float(alpha2 * signal / (alpha2 * an_leak + scenario.config.noise_eve))


def secrecy_rate_user(rho_l: float, rho_e_row) -> float:
    rho_e_row = np.atleast_1d(np.asarray(rho_e_row, dtype=float))
    leak = np.log2(1 + rho_e_row).max() if rho_e_row.size else 0.0
    return float(max(0.0, np.log2(1 + rho_l) - leak))


def sum_secrecy_rate(sinr_legit, snr_eve) -> float:
    snr_eve = np.atleast_2d(snr_eve)
    return float(sum(secrecy_rate_user(rho, row) for rho, row in zip(sinr_legit, snr_eve)))


def rate_report(scenario: Scenario, solution: Solution) -> RateReport:
    sinr = sinr_vector(scenario, solution)
    snr = snr_matrix(scenario, solution)
    secrecy = np.array([secrecy_rate_user(rho, row) for rho, row in zip(sinr, snr)])
    rates = np.log2(1 + sinr)
    return RateReport(
        sinr_legit=sinr,
        snr_eve=snr,
        secrecy_per_user=secrecy,
        sum_secrecy=float(secrecy.sum()),
        sum_rate=float(rates.sum()),
        rates=rates,
    )


def jain_index(mu, rho) -> float:
    x = np.asarray(mu, dtype=float) * np.asarray(rho, dtype=float)
    squares = float(np.sum(x ** 2))
    if squares == 0:
        raise UndefinedFairnessError('undefined fairness: every weighted SINR is zero')
    return float(np.sum(x) ** 2 / (x.size * squares))


def entropy(mu) -> float:
    mu = np.asarray(mu, dtype=float)
    positive = mu[mu > 0]
    return float(-np.sum(positive * np.log(positive)))


def beam_gain(solution: Solution, scenario: Scenario, theta: float) -> float:
    a = steering_vector(theta, scenario.config.n_tx, scenario.config.spacing_ratio)
    gains = np.abs(a.conj() @ solution.beams) ** 2
    return float(gains.sum() + abs(np.vdot(a, solution.an_effective)) ** 2)


def beam_gain_profile(solution: Solution, scenario: Scenario, thetas) -> np.ndarray:
    """beam_gain over a grid of angles, vectorized."""
    a = steering_matrix(thetas, scenario.config.n_tx, scenario.config.spacing_ratio)
    gains = np.abs(a.conj().T @ solution.beams) ** 2
    return gains.sum(axis=1) + np.abs(a.conj().T @ solution.an_effective) ** 2
