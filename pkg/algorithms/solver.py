import time
from typing import Optional, Tuple

import numpy as np

from models import Scenario, Solution, SolveTrace, IterationRecord, ConvergenceStatus
from algorithms.an_qt import ANQT, project_n
from algorithms.beamform_qt import BeamformQT, project_w
from algorithms.feasibility import evaluate_margins
from algorithms.metrics import sinr_vector, rate_report
from algorithms.nullspace import NullProjector, null_projector
from utils.logger import info_logger
from utils.rng import generator, complex_gaussian, AN_INIT_STREAM


def objective_weighted(scenario: Scenario, solution: Solution, mu) -> float:
    return float(np.dot(np.asarray(mu, dtype=float), np.log2(1 + sinr_vector(scenario, solution))))


def initialize(scenario: Scenario, projector: Optional[NullProjector] = None) -> Solution:
    """Matched-filter beams at full per-user power and a null-space AN draw filling the residual budget."""
    config = scenario.config
    projector = projector or null_projector(scenario.channels)

    norms = np.linalg.norm(scenario.channels, axis=1)
    beams = (np.sqrt(np.asarray(config.per_user_power)) / norms)[np.newaxis, :] * scenario.channels.conj().T

    n = projector.apply(complex_gaussian(generator(scenario.seed, AN_INIT_STREAM), config.n_tx))
    an_power = float(np.real(np.vdot(n, n)))
    n = n * np.sqrt(config.an_budget / an_power) if an_power > 0 else np.zeros(config.n_tx, dtype=complex)
    n_eff = projector.apply(n)

    beams = np.stack([project_w(beams[:, k], scenario, k, n_eff) for k in range(config.n_users)], axis=1)
    solution = Solution(beams, n, n_eff)
    n, _ = project_n(n, solution, scenario, projector)
    return Solution(beams, n, projector.apply(n))


class AlternatingSolver:
    """Alternates the beamformer and AN blocks until the weighted objective settles."""

    def __init__(self, scenario: Scenario, mu, projector: Optional[NullProjector] = None, timing: bool = True):
        self._scenario = scenario
        self._mu = np.asarray(mu, dtype=float)
        self._projector = projector or null_projector(scenario.channels)
        self._timing = timing
        self._beamform = BeamformQT(scenario, self._projector, self._mu)
        self._an = ANQT(scenario, self._projector, self._mu)

    @property
    def projector(self) -> NullProjector:
        return self._projector

    def objective(self, solution: Solution) -> float:
        return objective_weighted(self._scenario, solution, self._mu)

    def _record(self, iteration: int, solution: Solution, objective: float, f: float, f_r: float, start: float) -> IterationRecord:
        margins = evaluate_margins(self._scenario, solution)
        return IterationRecord(
            iteration=iteration,
            objective=objective,
            sum_secrecy=rate_report(self._scenario, solution).sum_secrecy,
            f=f,
            f_r=f_r,
            min_power_slack=margins.min_power_slack,
            min_sensing_margin=margins.min_sensing_margin,
            wall_time=time.perf_counter() - start if self._timing else 0.0,
        )

    def solve(self, initial: Optional[Solution] = None) -> Tuple[Solution, SolveTrace, ConvergenceStatus]:
        config = self._scenario.config
        start = time.perf_counter()
        solution = initial.copy() if initial is not None else initialize(self._scenario, self._projector)
        trace = SolveTrace()
        self._beamform.reset()

        previous = self.objective(solution)
        trace.append(self._record(0, solution, previous, np.nan, np.nan, start))
        if not np.isfinite(previous):
            info_logger.warning(f'solver aborted at initialization for scenario seed={self._scenario.seed}')
            return solution, trace, ConvergenceStatus.ABORTED

        status = ConvergenceStatus.MAX_ITERS
        for iteration in range(1, config.max_outer_iters + 1):
            first = self._beamform.run_pass(solution)
            trace.zeta_fallbacks += first.zeta_fallbacks
            trace.jacobi_rejections += int(first.jacobi_rejected)
            trace.extrapolations += int(first.extrapolated)
            if not np.all(np.isfinite(first.solution.beams)):
                solution = first.solution
                trace.append(self._record(iteration, solution, self.objective(solution), first.surrogate_after, np.nan, start))
                info_logger.warning(f'solver aborted at iteration {iteration} for scenario seed={self._scenario.seed}: non-finite beams')
                status = ConvergenceStatus.ABORTED
                break
            second = self._an.run_pass(first.solution)
            solution = second.solution
            trace.zeta_fallbacks += second.zeta_fallbacks

            current = self.objective(solution)
            trace.append(self._record(iteration, solution, current, first.surrogate_after, second.surrogate_after, start))
            if not np.isfinite(current):
                info_logger.warning(f'solver aborted at iteration {iteration} for scenario seed={self._scenario.seed}')
                status = ConvergenceStatus.ABORTED
                break
            if abs(current - previous) <= config.conv_tol * max(1.0, abs(current)):
                status = ConvergenceStatus.CONVERGED
                break
            previous = current

        if trace.zeta_fallbacks:
            info_logger.warning(
                f'scenario seed={self._scenario.seed}: closed-form zeta replaced by the numeric '
                f'stationary point {trace.zeta_fallbacks} times'
            )
        info_logger.info(
            f'solve finished for scenario seed={self._scenario.seed}: status={status.value}, '
            f'iterations={trace.iterations - 1}, objective={trace.records[-1].objective:.6f}'
        )
        return solution, trace, status


def alternating_solve(scenario: Scenario, mu, initial: Optional[Solution] = None, timing: bool = True):
    return AlternatingSolver(scenario, mu, timing=timing).solve(initial)
