import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.stats import sem

from algorithms import AlternatingSolver, null_projector, hfro_optimize, jain_index, rate_report, evaluate_margins
from algorithms.fairness import path_endpoints
from algorithms.metrics import sinr_vector, beam_gain_profile
from models import (
    SystemConfig, Scenario, Solution, SolveTrace, ConvergenceStatus, TrialRecord, RateReport,
    ConstraintMargins, default_fairness_floor, default_target_angles_deg,
)
from utils import Cache
from utils.config_loader import config_to_dict
from utils.rng import trial_seed
from utils.scenario_factory import ScenarioFactory, steering_matrix
from utils.logger import info_logger

SWEEPS = ('snr', 'ntx', 'users', 'targets', 'theta0')
INTEGER_SWEEPS = ('ntx', 'users', 'targets')
AGGREGATED_METRICS = ('sum_secrecy', 'sum_rate', 'fairness_index', 'iterations')
CACHE_VERSION = 1


@dataclass
class TrialOutcome:
    solution: Solution
    trace: SolveTrace
    status: ConvergenceStatus
    mu: np.ndarray
    fairness_trace: list
    report: RateReport
    margins: ConstraintMargins
    iterations: int


def parse_sweep(sweep: Optional[str]) -> Tuple[str, List[float]]:
    """`snr=0:5:30` (inclusive range) or `ntx=8,16,18`; no sweep gives one base point."""
    if not sweep:
        return 'base', [0.0]
    if '=' not in sweep:
        raise ValueError(f'sweep must look like name=values, got {sweep!r}')
    name, raw = sweep.split('=', 1)
    name = name.strip().lower()
    if name not in SWEEPS:
        raise ValueError(f'unknown sweep {name!r}, expected one of {SWEEPS}')

    if ':' in raw:
        parts = [float(_) for _ in raw.split(':')]
        if len(parts) != 3 or parts[1] <= 0:
            raise ValueError(f'range sweep must be start:step:stop with a positive step, got {raw!r}')
        start, step, stop = parts
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [start + step * i for i in range(max(count, 0))]
    else:
        values = [float(_) for _ in raw.split(',') if _.strip()]
    if not values:
        raise ValueError(f'sweep {sweep!r} has no values')
    if name in INTEGER_SWEEPS:
        values = [float(int(round(_))) for _ in values]
    return name, values


def apply_sweep_point(config: SystemConfig, name: str, value: float) -> SystemConfig:
    if name == 'base':
        return config
    if name == 'snr':
        return config.with_snr_db(value)
    if name == 'ntx':
        return config.with_overrides(n_tx=int(value))
    if name == 'theta0':
        return config.with_overrides(beamwidth_half=math.radians(value))
    if name == 'users':
        k = int(value)
        floor = config.fairness_floor if (k == 1 or config.fairness_floor > 1.0 / k) else default_fairness_floor(k)
        return config.with_overrides(
            n_users=k,
            per_user_power=(config.total_power / (2 * k),) * k,
            noise_user=(config.noise_user[0],) * k,
            fairness_floor=floor,
        )
    if name == 'targets':
        j = int(value)
        return config.with_overrides(
            n_targets=j,
            target_angles=tuple(math.radians(_) for _ in default_target_angles_deg(j)),
            eaves_rate_cap=(config.eaves_rate_cap[0],) * j,
            sensing_floor=(config.sensing_floor[0],) * j,
            path_gain=(config.path_gain[0],) * j,
        )
    raise ValueError(f'unknown sweep {name!r}')


def snr_db_of(config: SystemConfig) -> float:
    return float(-10 * math.log10(config.noise_user[0]))


def solve_with_fairness(scenario: Scenario, timing: bool = False) -> TrialOutcome:
    """Solve with uniform weights, optimize the weights on the resulting SINRs, then re-solve warm."""
    config = scenario.config
    projector = null_projector(scenario.channels)
    uniform = np.full(config.n_users, 1.0 / config.n_users)
    solution, first_trace, _ = AlternatingSolver(scenario, uniform, projector, timing).solve()

    mu, fairness_trace = hfro_optimize(sinr_vector(scenario, solution), config)
    solution, trace, status = AlternatingSolver(scenario, mu, projector, timing).solve(solution)
    report = rate_report(scenario, solution)
    return TrialOutcome(
        solution=solution,
        trace=trace,
        status=status,
        mu=mu,
        fairness_trace=fairness_trace,
        report=report,
        margins=evaluate_margins(scenario, solution),
        iterations=first_trace.iterations + trace.iterations - 2,
    )


def run_trial(config: SystemConfig, seed: int, point_index: int, sweep_value: float, trial_index: int, timing: bool = False) -> TrialRecord:
    common = dict(
        sweep_index=point_index,
        sweep_value=sweep_value,
        trial=trial_index,
        seed=seed,
        snr_db=snr_db_of(config),
        n_tx=config.n_tx,
        n_users=config.n_users,
        n_targets=config.n_targets,
        theta0_deg=math.degrees(config.beamwidth_half),
    )
    start = time.perf_counter()
    try:
        outcome = solve_with_fairness(ScenarioFactory(config).get_scenario(seed), timing)
    except Exception as e:
        info_logger.error(f'trial {trial_index} at sweep point {point_index} (seed={seed}) aborted: {e!r}')
        return TrialRecord(
            **common,
            sum_secrecy=np.nan,
            sum_rate=np.nan,
            fairness_index=np.nan,
            iterations=0,
            converged=False,
            status=ConvergenceStatus.ABORTED.value,
            power_feasible=False,
            eaves_feasible=False,
            sensing_feasible=False,
            min_sensing_margin=np.nan,
            power_slack=np.nan,
            beamwidth_violations=0,
            runtime_ms=(time.perf_counter() - start) * 1000 if timing else None,
        )

    margins = outcome.margins
    return TrialRecord(
        **common,
        sum_secrecy=outcome.report.sum_secrecy,
        sum_rate=outcome.report.sum_rate,
        fairness_index=jain_index(outcome.mu, outcome.report.sinr_legit),
        iterations=outcome.iterations,
        converged=outcome.status == ConvergenceStatus.CONVERGED,
        status=outcome.status.value,
        power_feasible=margins.power_feasible,
        eaves_feasible=margins.eaves_feasible,
        sensing_feasible=margins.sensing_feasible,
        min_sensing_margin=margins.min_sensing_margin,
        power_slack=margins.min_power_slack,
        beamwidth_violations=margins.beamwidth_violations,
        runtime_ms=(time.perf_counter() - start) * 1000 if timing else None,
    )


def _run_trial_job(job) -> TrialRecord:
    return run_trial(*job)


class Evaluation:
    """Monte Carlo sweep: one TrialRecord per (sweep point, trial) plus per-point aggregates."""

    def __init__(
            self,
            config: SystemConfig,
            sweep: Optional[str] = None,
            trials: int = 1,
            master_seed: int = 0,
            workers: int = 1,
            from_cache: bool = True,
            timing: bool = False,
    ):
        if trials < 1:
            raise ValueError('trials must be at least 1')
        self._config = config
        self._sweep_name, self._sweep_values = parse_sweep(sweep)
        self._trials = trials
        self._master_seed = master_seed
        self._workers = max(1, workers)
        self._from_cache = from_cache
        self._timing = timing

    @property
    def sweep_name(self) -> str:
        return self._sweep_name

    def point_configs(self) -> List[SystemConfig]:
        return [apply_sweep_point(self._config, self._sweep_name, _) for _ in self._sweep_values]

    def _cache_key(self, config: SystemConfig, value: float) -> str:
        return Cache.digest({
            'version': CACHE_VERSION,
            'config': config_to_dict(config),
            'sweep': [self._sweep_name, value],
            'trials': self._trials,
            'seed': self._master_seed,
            'timing': self._timing,
        })

    def _run_point(self, point_index: int, config: SystemConfig, value: float) -> List[TrialRecord]:
        jobs = [
            (config, trial_seed(self._master_seed, point_index, i), point_index, value, i, self._timing)
            for i in range(self._trials)
        ]
        if self._workers > 1:
            with ProcessPoolExecutor(max_workers=self._workers) as pool:
                return list(pool.map(_run_trial_job, jobs))

        records = []
        for job in jobs:
            records.append(_run_trial_job(job))
            info_logger.info(f'sweep point {point_index} ({self._sweep_name}={value}): trial {len(records)}/{self._trials} done')
        return records

    def run(self) -> List[TrialRecord]:
        records = []
        for point_index, (config, value) in enumerate(zip(self.point_configs(), self._sweep_values)):
            info_logger.info(f'sweep point {point_index}: {self._sweep_name}={value} started')
            key = self._cache_key(config, value)
            cached = Cache.load(key) if self._from_cache else None
            if cached is not None:
                info_logger.info(f'sweep point {point_index} loaded from cache')
                records.extend(cached)
                continue
            point_records = self._run_point(point_index, config, value)
            if self._from_cache:
                Cache.store(key, point_records)
            records.extend(point_records)
        return records

    def evaluate(self) -> Tuple[List[TrialRecord], pd.DataFrame]:
        records = self.run()
        return records, aggregate(records, self._sweep_name)


def records_frame(records: List[TrialRecord], timing: bool = False) -> pd.DataFrame:
    return pd.DataFrame([_.as_row(timing) for _ in records])


def aggregate(records: List[TrialRecord], sweep_name: str = 'base') -> pd.DataFrame:
    """Mean and standard error per sweep point; aborted trials are excluded from the metric statistics."""
    frame = records_frame(records)
    rows = []
    for point_index, group in frame.groupby('sweep_index', sort=True):
        finished = group[group['status'] != ConvergenceStatus.ABORTED.value]
        row = {
            'sweep_index': int(point_index),
            'sweep_name': sweep_name,
            'sweep_value': float(group['sweep_value'].iloc[0]),
            'trials': len(group),
            'aborted': len(group) - len(finished),
            'converged_rate': float(group['converged'].mean()),
            'feasible_rate': float((group['power_feasible'] & group['eaves_feasible'] & group['sensing_feasible']).mean()),
        }
        for metric in AGGREGATED_METRICS:
            values = finished[metric].to_numpy(dtype=float)
            row[f'{metric}_mean'] = float(np.mean(values)) if values.size else np.nan
            row[f'{metric}_sem'] = float(sem(values)) if values.size > 1 else np.nan
        rows.append(row)
    return pd.DataFrame(rows)


def run_monte_carlo(config: SystemConfig, sweep: Optional[str], trials: int, master_seed: int, **kwargs):
    return Evaluation(config, sweep, trials, master_seed, **kwargs).evaluate()


def export_beampattern(config: SystemConfig, solution: Solution, grid_step_deg: float = 0.5) -> List[dict]:
    """
    Beam gain over [-90, 90] degrees with the single narrow-beam reference.

    Each target marks its nearest grid row with its index, its sensing gain
    |alpha_j|^2 a^H W a at the exact target angle and its sensing margin. A target
    whose nearest row is already taken gets its own row at the exact angle.
    """
    if grid_step_deg <= 0:
        raise ValueError('grid_step_deg must be positive')
    count = int(round(180.0 / grid_step_deg)) + 1
    grid_deg = np.linspace(-90.0, 90.0, count)
    pattern_scenario = Scenario(
        config=config,
        channels=np.zeros((config.n_users, config.n_tx), dtype=complex),
        target_steering=steering_matrix(config.target_angles, config.n_tx, config.spacing_ratio),
        seed=0,
    )
    reference = Solution(
        beams=pattern_scenario.target_steering * np.sqrt(config.total_power / (config.n_targets * config.n_tx)),
        an=np.zeros(config.n_tx, dtype=complex),
        an_effective=np.zeros(config.n_tx, dtype=complex),
    )

    def grid_row(theta_deg: float, gain: float, reference_gain: float) -> dict:
        return {
            'theta_deg': float(theta_deg),
            'gain': float(gain),
            'reference_gain': float(reference_gain),
            'target': False,
            'target_index': -1,
            'sensing_gain': np.nan,
            'sensing_margin': np.nan,
        }

    thetas = np.radians(grid_deg)
    gains = beam_gain_profile(solution, pattern_scenario, thetas)
    reference_gains = beam_gain_profile(reference, pattern_scenario, thetas)
    rows = [grid_row(grid_deg[i], gains[i], reference_gains[i]) for i in range(count)]

    target_angles = np.asarray(config.target_angles)
    raw_target_gains = beam_gain_profile(solution, pattern_scenario, target_angles)
    sensing = np.abs(pattern_scenario.path_gain) ** 2 * raw_target_gains
    for j, theta in enumerate(target_angles):
        nearest = int(np.argmin(np.abs(grid_deg - math.degrees(theta))))
        row = rows[nearest]
        if row['target']:
            row = grid_row(
                math.degrees(theta),
                raw_target_gains[j],
                beam_gain_profile(reference, pattern_scenario, [theta])[0],
            )
            rows.append(row)
        row.update({
            'target': True,
            'target_index': j,
            'sensing_gain': float(sensing[j]),
            'sensing_margin': float(sensing[j] - config.sensing_floor[j]),
        })
    rows.sort(key=lambda _: _['theta_deg'])
    return rows



def export_fairness_path(rho, config: SystemConfig) -> List[dict]:
    mu, trace = hfro_optimize(rho, config)
    rows = []
    for state in path_endpoints(trace):
        row = {
            't': state.t,
            'chi': state.chi,
            'objective': state.objective,
            'fairness': state.fairness,
            'sum_rate_term': state.sum_rate_term,
            'entropy': state.entropy_val,
        }
        row.update({f'mu_{k + 1}': float(v) for k, v in enumerate(state.mu)})
        rows.append(row)
    return rows


def trace_rows(trace: SolveTrace, timing: bool = False) -> List[dict]:
    rows = []
    for record in trace.records:
        row = {
            'iteration': record.iteration,
            'objective': record.objective,
            'sum_secrecy': record.sum_secrecy,
            'f': record.f,
            'f_r': record.f_r,
            'min_power_slack': record.min_power_slack,
            'min_sensing_margin': record.min_sensing_margin,
        }
        if timing:
            row['wall_time'] = record.wall_time
        rows.append(row)
    return rows
