import numpy as np

# Stream ids under one scenario seed.
CHANNEL_STREAM = 0
AN_INIT_STREAM = 1
POWER_ITER_STREAM = 2


def generator(*key: int) -> np.random.Generator:
    """Counter-based Philox stream addressed by a tuple of nonnegative integers."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(key))))


def trial_seed(master_seed: int, point_index: int, trial_index: int) -> int:
    """Derive a 63-bit scenario seed for one (sweep point, trial) pair."""
    state = np.random.SeedSequence([master_seed, point_index, trial_index]).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))


def complex_gaussian(rng: np.random.Generator, size) -> np.ndarray:
    """CN(0, 1) samples, (x + iy) / sqrt(2)."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)
