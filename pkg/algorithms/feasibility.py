import math

import numpy as np

from models import Scenario, Solution, ConstraintMargins
from algorithms.metrics import beam_gain_profile


def eaves_cap(scenario: Scenario, an_effective: np.ndarray) -> np.ndarray:
    """
    Per-target bound on |a_j^H w_k|^2 equivalent to the eavesdropper rate cap beta_j:

        (2^beta_j - 1) * (|alpha_j|^2 |a_j^H n_eff|^2 + sigma_e^2) / |alpha_j|^2

    Targets with alpha_j = 0 cannot eavesdrop and get an infinite cap.
    """
    config = scenario.config
    alpha2 = np.abs(scenario.path_gain) ** 2
    an_leak = np.abs(scenario.target_steering.conj().T @ an_effective) ** 2
    factor = 2 ** np.asarray(config.eaves_rate_cap) - 1
    cap = factor * (alpha2 * an_leak + config.noise_eve) / np.where(alpha2 > 0, alpha2, 1.0)
    return np.where(alpha2 > 0, cap, np.inf)


def beam_leakage(scenario: Scenario, beams: np.ndarray) -> np.ndarray:
    """K x J quadratic forms |a_j^H w_k|^2."""
    return (np.abs(scenario.target_steering.conj().T @ beams) ** 2).T


def sensing_gains(scenario: Scenario, solution: Solution, thetas=None) -> np.ndarray:
    """|alpha_j|^2 a^H W~ a at each target angle (or at the given angles, one per target)."""
    thetas = scenario.config.target_angles if thetas is None else thetas
    return np.abs(scenario.path_gain) ** 2 * beam_gain_profile(solution, scenario, thetas)


def beamwidth_edges(scenario: Scenario) -> np.ndarray:
    """J x 2 angles theta_j -/+ theta_0 clipped to [-pi/2, pi/2]."""
    centers = np.asarray(scenario.config.target_angles)
    half = scenario.config.beamwidth_half
    edges = np.stack([centers - half, centers + half], axis=1)
    return np.clip(edges, -math.pi / 2, math.pi / 2)


def evaluate_margins(scenario: Scenario, solution: Solution) -> ConstraintMargins:
    config = scenario.config
    beam_power = np.sum(np.abs(solution.beams) ** 2, axis=0)
    an_power = float(np.sum(np.abs(solution.an_effective) ** 2))

    cap = eaves_cap(scenario, solution.an_effective)
    eaves_slack = cap[np.newaxis, :] - beam_leakage(scenario, solution.beams)

    edges = beamwidth_edges(scenario)
    edge_gains = np.stack([sensing_gains(scenario, solution, edges[:, 0]), sensing_gains(scenario, solution, edges[:, 1])], axis=1)

    return ConstraintMargins(
        per_user_power_slack=np.asarray(config.per_user_power) - beam_power,
        total_power_slack=float(config.total_power - sum(config.per_user_power) - an_power),
        eaves_cap_slack=eaves_slack,
        sensing_margin=sensing_gains(scenario, solution) - np.asarray(config.sensing_floor),
        beamwidth_excess=edge_gains - np.asarray(config.sensing_floor)[:, np.newaxis] / 2,
    )
