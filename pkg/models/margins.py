from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from const import FEASIBILITY_TOL


@dataclass
class ConstraintMargins:
    per_user_power_slack: np.ndarray
    total_power_slack: float
    eaves_cap_slack: np.ndarray
    sensing_margin: np.ndarray
    beamwidth_excess: np.ndarray

    @property
    def power_feasible(self) -> bool:
        return bool(np.all(self.per_user_power_slack >= -FEASIBILITY_TOL) and self.total_power_slack >= -FEASIBILITY_TOL)

    @property
    def eaves_feasible(self) -> bool:
        return bool(np.all(self.eaves_cap_slack >= -FEASIBILITY_TOL))

    @property
    def sensing_feasible(self) -> bool:
        return bool(np.all(self.sensing_margin >= -FEASIBILITY_TOL))

    @property
    def feasible(self) -> bool:
        # beamwidth is reported, never gating
        return self.power_feasible and self.eaves_feasible and self.sensing_feasible

    @property
    def min_power_slack(self) -> float:
        return float(min(self.per_user_power_slack.min(initial=np.inf), self.total_power_slack))

    @property
    def min_sensing_margin(self) -> float:
        return float(self.sensing_margin.min(initial=np.inf))

    @property
    def beamwidth_violations(self) -> int:
        return int(np.sum(self.beamwidth_excess > FEASIBILITY_TOL))


@dataclass
class FeasibilityReport:
    power_slack: float
    min_sensing_margin: float
    scale: float = 1.0
    infeasible_targets: List[int] = field(default_factory=list)
    beamwidth_violations: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def sensing_feasible(self) -> bool:
        return not self.infeasible_targets

    @property
    def is_empty(self) -> bool:
        return self.scale == 1.0 and not self.infeasible_targets and not self.beamwidth_violations
