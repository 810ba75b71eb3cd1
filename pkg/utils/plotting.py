import matplotlib

matplotlib.use('Agg')
matplotlib.rcParams['svg.hashsalt'] = 'isac'

from matplotlib import pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from utils.logger import info_logger  # noqa: E402

SWEEP_LABELS = {
    'snr': 'SNR [dB]',
    'ntx': 'Transmit antennas $N_t$',
    'users': 'Users $K$',
    'targets': 'Targets $J$',
    'theta0': r'Half beamwidth $\theta_0$ [deg]',
}


def _save(fig, path: str):
    fig.tight_layout()
    fig.savefig(path, format='svg', metadata={'Date': None})
    plt.close(fig)
    info_logger.info(f'plot saved to {path}')


def plot_aggregates(aggregates: pd.DataFrame, sweep_name: str, path: str):
    fig, ax = plt.subplots(figsize=(6, 4))
    x = aggregates['sweep_value']
    for column, label in (('sum_secrecy', 'Average secrecy rate'), ('sum_rate', 'Average data rate')):
        ax.errorbar(x, aggregates[f'{column}_mean'], yerr=aggregates[f'{column}_sem'], marker='o', capsize=3, label=label)
    ax.set_xlabel(SWEEP_LABELS.get(sweep_name, sweep_name))
    ax.set_ylabel('bit/s/Hz')
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)


def plot_beampattern(pattern: pd.DataFrame, path: str):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(pattern['theta_deg'], pattern['gain'], label='Proposed')
    if 'reference_gain' in pattern:
        ax.plot(pattern['theta_deg'], pattern['reference_gain'], linestyle='--', label='Single narrow beam')
    for theta in pattern.loc[pattern['target'], 'theta_deg']:
        ax.axvline(theta, color='gray', linestyle=':', linewidth=1)
    ax.set_xlabel(r'$\theta$ [deg]')
    ax.set_ylabel('Beam gain')
    ax.set_xlim(-90, 90)
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)


def plot_convergence(trace: pd.DataFrame, path: str):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(trace['iteration'], trace['objective'], marker='.', label='Weighted objective')
    ax.plot(trace['iteration'], trace['sum_secrecy'], marker='.', label='Sum secrecy rate')
    ax.set_xlabel('Iteration')
    ax.set_ylabel('bit/s/Hz')
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)


def plot_fairness_path(path_rows: pd.DataFrame, path: str):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(path_rows['chi'], path_rows['fairness'], marker='o', label='Jain index')
    ax.plot(path_rows['chi'], path_rows['sum_rate_term'], marker='s', label='Weighted rate')
    ax.set_xlabel(r'$\chi$')
    ax.invert_xaxis()
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)
