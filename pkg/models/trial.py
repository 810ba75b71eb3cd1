from dataclasses import dataclass, asdict, field
from typing import Optional


@dataclass
class TrialRecord:
    sweep_index: int
    sweep_value: float
    trial: int
    seed: int
    snr_db: float
    n_tx: int
    n_users: int
    n_targets: int
    theta0_deg: float
    sum_secrecy: float
    sum_rate: float
    fairness_index: float
    iterations: int
    converged: bool
    status: str
    power_feasible: bool
    eaves_feasible: bool
    sensing_feasible: bool
    min_sensing_margin: float
    power_slack: float
    beamwidth_violations: int
    runtime_ms: Optional[float] = field(default=None)

    @property
    def feasible(self) -> bool:
        return self.power_feasible and self.eaves_feasible and self.sensing_feasible

    def as_row(self, timing: bool = False) -> dict:
        row = asdict(self)
        if not timing:
            row.pop('runtime_ms')
        return row
