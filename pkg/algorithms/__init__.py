from .nullspace import NullProjector, RankDeficientChannelError, null_projector, effective_noise, effective_covariance
from .metrics import UndefinedFairnessError, rate_report, jain_index, entropy, beam_gain
from .fairness import NonFiniteObjectiveError, hfro_optimize
from .feasibility import evaluate_margins
from .beamform_qt import BeamformQT
from .an_qt import ANQT
from .solver import AlternatingSolver, alternating_solve, initialize, objective_weighted
