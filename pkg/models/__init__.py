from .system_config import SystemConfig, ConfigError, default_fairness_floor, default_target_angles_deg
from .scenario import Scenario
from .solution import Solution, RateReport
from .aux_state import AuxStateI, AuxStateII
from .fairness_state import FairnessState
from .trace import SolveTrace, IterationRecord, ConvergenceStatus
from .margins import ConstraintMargins, FeasibilityReport
from .trial import TrialRecord
