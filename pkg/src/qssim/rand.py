"""Deterministic random-stream derivation.

All randomness in the package flows from numpy Generators.  Experiments
derive one substream per trial from (master_seed, trial_index) so that
runs are bit-reproducible and trials can execute in any order or on any
worker without sharing generator state.
"""

from __future__ import annotations

import numpy as np


def substream(seed: int, *indices: int) -> np.random.Generator:
    """Generator for the substream identified by (seed, *indices)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, indices)]))


def fresh_seed() -> int:
    """Draw a random 63-bit seed from OS entropy (recorded by callers)."""
    return int(np.random.SeedSequence().entropy % (1 << 63))
