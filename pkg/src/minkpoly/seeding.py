"""Deterministic seed splitting for batch work.

Task ``i`` of a run seeded with ``seed`` draws from
``numpy.random.SeedSequence(seed, spawn_key=(i,))``.  That is exactly the
i-th child ``SeedSequence(seed).spawn(...)`` would hand out, so serial and
parallel runs see the same streams.
"""

from __future__ import annotations

import numpy as np


def task_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
