import argparse
import os
import sys

import numpy as np

from algorithms import AlternatingSolver, null_projector
from algorithms.metrics import sinr_vector
from const import DEFAULT_CONFIG_PATH, OUTPUT_DIR
from evaluation import (
    Evaluation, aggregate, apply_sweep_point, records_frame, solve_with_fairness, export_beampattern, export_fairness_path, trace_rows,
)
from models import ConfigError
from utils.config_loader import load_config, dump_config
from utils import plotting
from utils.export import ensure_dir, write_rows, write_frame
from utils.scenario_factory import ScenarioFactory
from utils.logger import info_logger

parser = argparse.ArgumentParser(description='Secure fairness-aware ISAC beamforming and Monte Carlo simulation.')
parser.add_argument('--config', type=str, default=DEFAULT_CONFIG_PATH, help='JSON parameter file (angles in degrees).')
parser.add_argument('--trials', type=int, default=1, help='Monte Carlo trials per sweep point.')
parser.add_argument('--seed', type=int, default=0, help='Master seed.')
parser.add_argument('--sweep', type=str, default=None, help='Sweep such as snr=0:5:30 or ntx=8,16,18.')
parser.add_argument('--out', type=str, default=OUTPUT_DIR, help='Output directory.')
parser.add_argument('--plot', action='store_true', help='Also write SVG plots.')
parser.add_argument('--no-cache', action='store_true', help='If set, the cache will not be used.')
parser.add_argument('--timing', action='store_true', help='Add runtime columns to the CSV outputs.')
parser.add_argument('--workers', type=int, default=1, help='Worker processes for trials.')
parser.add_argument('--grid-step', type=float, default=0.5, help='Beampattern grid step in degrees.')
parser.add_argument('--rho', type=str, default=None, help='Comma-separated SINRs for the fairness command.')


def validate(args):
    if args.trials < 1:
        raise ConfigError('--trials must be at least 1')
    if args.seed < 0:
        raise ConfigError('--seed must be nonnegative')
    if args.workers < 1:
        raise ConfigError('--workers must be at least 1')


def _prepare(args):
    validate(args)
    config = load_config(args.config)
    out = ensure_dir(args.out)
    dump_config(config, os.path.join(out, 'config.json'))
    return config, out


def run_solve(args):
    config, out = _prepare(args)
    info_logger.info(f'solve started with seed={args.seed}')
    scenario = ScenarioFactory(config).get_scenario(args.seed)
    outcome = solve_with_fairness(scenario, timing=args.timing)

    trace = write_rows(trace_rows(outcome.trace, args.timing), os.path.join(out, 'trace.csv'))
    pattern = write_rows(export_beampattern(config, outcome.solution, args.grid_step), os.path.join(out, 'beampattern.csv'))
    summary = {
        'seed': scenario.seed,
        'status': outcome.status.value,
        'iterations': outcome.iterations,
        'sum_secrecy': outcome.report.sum_secrecy,
        'sum_rate': outcome.report.sum_rate,
        'feasible': outcome.margins.feasible,
        'min_sensing_margin': outcome.margins.min_sensing_margin,
    }
    summary.update({f'mu_{k + 1}': float(v) for k, v in enumerate(outcome.mu)})
    write_rows([summary], os.path.join(out, 'summary.csv'))
    if args.plot:
        plotting.plot_convergence(trace, os.path.join(out, 'convergence.svg'))
        plotting.plot_beampattern(pattern, os.path.join(out, 'beampattern.svg'))
    print(f"status={summary['status']} sum_secrecy={summary['sum_secrecy']:.4f} sum_rate={summary['sum_rate']:.4f}")


def run_simulate(args):
    config, out = _prepare(args)
    info_logger.info(f'simulate started: sweep={args.sweep} trials={args.trials} seed={args.seed}')
    evaluation = Evaluation(
        config,
        sweep=args.sweep,
        trials=args.trials,
        master_seed=args.seed,
        workers=args.workers,
        from_cache=not args.no_cache,
        timing=args.timing,
    )
    records = evaluation.run()
    write_frame(records_frame(records, args.timing), os.path.join(out, 'records.csv'))
    aggregates = aggregate(records, evaluation.sweep_name)
    write_frame(aggregates, os.path.join(out, 'aggregates.csv'))
    info_logger.info(f'simulate finished: {len(records)} records written to {out}')
    if args.plot:
        plotting.plot_aggregates(aggregates, evaluation.sweep_name, os.path.join(out, 'aggregates.svg'))
    print(aggregates.to_string(index=False))


def run_beampattern(args):
    config, out = _prepare(args)
    scenario = ScenarioFactory(config).get_scenario(args.seed)
    outcome = solve_with_fairness(scenario)
    pattern = write_rows(export_beampattern(config, outcome.solution, args.grid_step), os.path.join(out, 'beampattern.csv'))
    if args.plot:
        plotting.plot_beampattern(pattern, os.path.join(out, 'beampattern.svg'))


def run_fairness(args):
    config, out = _prepare(args)
    if args.rho:
        rho = np.array([float(_) for _ in args.rho.split(',')])
        if rho.size != config.n_users:
            config = apply_sweep_point(config, 'users', rho.size)
    else:
        scenario = ScenarioFactory(config).get_scenario(args.seed)
        uniform = np.full(config.n_users, 1.0 / config.n_users)
        solution, _, _ = AlternatingSolver(scenario, uniform, null_projector(scenario.channels)).solve()
        rho = sinr_vector(scenario, solution)
    info_logger.info(f'fairness path for rho={rho.tolist()}')
    rows = write_rows(export_fairness_path(rho, config), os.path.join(out, 'fairness_path.csv'))
    if args.plot:
        plotting.plot_fairness_path(rows, os.path.join(out, 'fairness_path.svg'))


FUNCTION_MAP = {
    'solve': run_solve,
    'simulate': run_simulate,
    'beampattern': run_beampattern,
    'fairness': run_fairness,
}

parser.add_argument('command', choices=FUNCTION_MAP.keys(), help='The command to run.')


def main(argv=None):
    global_args = parser.parse_args(argv)
    func = FUNCTION_MAP[global_args.command]
    try:
        func(global_args)
    except (ConfigError, ValueError) as e:
        info_logger.error(f'{global_args.command} failed: {e}')
        print(f'error: {e}', file=sys.stderr)
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
