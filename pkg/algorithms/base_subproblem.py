import abc
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import newton

from models import Scenario, Solution, FeasibilityReport
from algorithms.nullspace import NullProjector

KAPPA_FLOOR = 1e-12
ZETA_TOL = 1e-8
ZETA_MIN = -1 + 1e-9
ZETA_MAX = 1e12
LN2 = math.log(2)


def nonhomogeneous_bound(x: np.ndarray, z: np.ndarray, d: np.ndarray, kappa: float) -> float:
    """
    Majorant of x^H D x anchored at z, valid whenever kappa >= lambda_max(D):

        kappa ||x||^2 + 2 Re{x^H (D - kappa I) z} + z^H (kappa I - D) z

    Equality holds at x = z.
    """
    dz = d @ z
    return float(
        kappa * np.real(np.vdot(x, x))
        + 2 * np.real(np.vdot(x, dz - kappa * z))
        + np.real(kappa * np.vdot(z, z) - np.vdot(z, dz))
    )


def zeta_objective(zeta: float, q: float) -> float:
    """phi(zeta) = (1 + zeta) q + log2(1 + zeta) - zeta, the zeta-dependent part of one user's transform."""
    return (1 + zeta) * q + math.log2(1 + zeta) - zeta


def zeta_derivative(zeta: float, q: float) -> float:
    return q + 1 / (LN2 * (1 + zeta)) - 1


def stationary_zeta(q: float) -> float:
    """Newton solve of phi'(zeta) = 0 in v = log(1 + zeta), clipped to [ZETA_MIN, ZETA_MAX]."""
    if not math.isfinite(q):
        return math.nan
    if q >= 1:
        return ZETA_MAX
    v = newton(
        lambda v: q - 1 + math.exp(-v) / LN2,
        x0=-math.log(LN2 * (1 - q)),
        fprime=lambda v: -math.exp(-v) / LN2,
        tol=1e-14,
        maxiter=100,
    )
    return float(min(max(math.expm1(v), ZETA_MIN), ZETA_MAX))


def resolve_zeta(printed_denominator: float, q: float) -> Tuple[float, bool]:
    """
    Evaluate the closed form 1 / (ln2 * denominator) - 1 and keep it if it zeroes
    phi'; otherwise return the numeric stationary point. The flag is True on fallback.
    """
    if printed_denominator > 0:
        zeta = 1 / (LN2 * printed_denominator) - 1
        if ZETA_MIN < zeta <= ZETA_MAX and abs(zeta_derivative(zeta, q)) <= ZETA_TOL:
            return zeta, False
    return stationary_zeta(q), True


def clamp_kappa(kappa: float) -> float:
    return max(kappa, KAPPA_FLOOR)


@dataclass
class PassResult:
    solution: Solution
    aux: object
    surrogate_before: float
    surrogate_after: float
    steps: List[Tuple[float, float]] = field(default_factory=list)
    zeta_fallbacks: int = 0
    jacobi_rejected: bool = False
    extrapolated: bool = False
    report: Optional[FeasibilityReport] = None


class BaseSubproblem:
    """One block of the alternating solver: a quadratic-transform pass followed by projection."""

    def __init__(self, scenario: Scenario, projector: NullProjector, mu: np.ndarray):
        self._scenario = scenario
        self._projector = projector
        self._mu = np.asarray(mu, dtype=float)

    @property
    def scenario(self) -> Scenario:
        return self._scenario

    @property
    def config(self):
        return self._scenario.config

    @property
    def mu(self) -> np.ndarray:
        return self._mu

    def effective(self, an: np.ndarray) -> np.ndarray:
        return self._projector.apply(an)

    def received_powers(self, beams: np.ndarray, an_effective: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(e_k, B_k, B^_k) for every user: e_k = h_k w_k, B_k the residual, B^_k = |e_k|^2 + B_k."""
        channels = self._scenario.channels
        gains = channels @ beams
        e = np.diag(gains).copy()
        total = np.sum(np.abs(gains) ** 2, axis=1)
        b_hat = total + np.abs(channels @ an_effective) ** 2 + self._scenario.noise_user
        return e, b_hat - np.abs(e) ** 2, b_hat

    @abc.abstractmethod
    def run_pass(self, solution: Solution) -> PassResult:
        pass
