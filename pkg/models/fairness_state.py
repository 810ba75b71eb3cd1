from dataclasses import dataclass

import numpy as np


@dataclass
class FairnessState:
    t: int
    step: int
    mu: np.ndarray
    chi: float
    g_norm: float
    objective: float
    fairness: float
    entropy_val: float
    sum_rate_term: float
