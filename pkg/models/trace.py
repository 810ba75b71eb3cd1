import enum
from dataclasses import dataclass, field
from typing import List


class ConvergenceStatus(enum.Enum):
    CONVERGED = 'converged'
    MAX_ITERS = 'max_iters'
    ABORTED = 'aborted'


@dataclass
class IterationRecord:
    iteration: int
    objective: float
    sum_secrecy: float
    f: float
    f_r: float
    min_power_slack: float
    min_sensing_margin: float
    wall_time: float


@dataclass
class SolveTrace:
    records: List[IterationRecord] = field(default_factory=list)
    zeta_fallbacks: int = 0
    jacobi_rejections: int = 0
    extrapolations: int = 0

    def append(self, record: IterationRecord):
        if self.records and record.iteration <= self.records[-1].iteration:
            raise ValueError('iteration indices must be strictly increasing')
        self.records.append(record)

    @property
    def objectives(self) -> List[float]:
        return [_.objective for _ in self.records]

    @property
    def iterations(self) -> int:
        return len(self.records)

    def __len__(self):
        return len(self.records)
