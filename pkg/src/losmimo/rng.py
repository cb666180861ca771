"""Counter-based random streams addressed by (master seed, trial index).

Every trial owns a fixed number of Philox counter blocks, so the uniforms for
trial ``t`` are a pure function of ``(master_seed, t)``. Any partition of the
trial range into chunks reproduces the same numbers bit for bit.
"""

from __future__ import annotations

import math

import numpy as np

RNG_ID = f"numpy.random.Philox (Philox4x64-10), numpy {np.__version__}"

_WORDS_PER_BLOCK = 4   # one Philox4x64 block yields four uint64 -> four doubles
_MASK64 = (1 << 64) - 1


def philox_key(master_seed: int) -> np.ndarray:
    """Expand a 64-bit seed into the 128-bit Philox key."""
    if not 0 <= int(master_seed) <= _MASK64:
        raise ValueError("master_seed must be a 64-bit unsigned integer")
    return np.random.SeedSequence(int(master_seed)).generate_state(2, np.uint64)


def blocks_per_trial(per_trial: int) -> int:
    return max(1, math.ceil(per_trial / _WORDS_PER_BLOCK))


def uniforms(master_seed: int, start_trial: int, n_trials: int, per_trial: int) -> np.ndarray:
    """Uniform [0, 1) draws of shape ``(n_trials, per_trial)`` for trials
    ``start_trial .. start_trial + n_trials - 1``."""
    blocks = blocks_per_trial(per_trial)
    first = int(start_trial) * blocks
    counter = [(first >> (64 * i)) & _MASK64 for i in range(4)]
    gen = np.random.Generator(np.random.Philox(key=philox_key(master_seed), counter=counter))
    width = blocks * _WORDS_PER_BLOCK
    return gen.random(n_trials * width).reshape(n_trials, width)[:, :per_trial]


def standard_normals(master_seed: int, start_trial: int, n_trials: int) -> np.ndarray:
    """One Box-Muller standard normal per trial."""
    u = uniforms(master_seed, start_trial, n_trials, 2)
    return np.sqrt(-2.0 * np.log1p(-u[:, 0])) * np.cos(2.0 * np.pi * u[:, 1])
