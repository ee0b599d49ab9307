"""Counter-based random streams for reproducible Monte-Carlo runs.

Streams use the Philox counter-based generator keyed by the master seed
and a packed path, so trial (i, t) of a sweep always sees the same draws
no matter how trials are scheduled or parallelized:

    key word 0 = master seed
    key word 1 = (context << 48) | (point_index << 32) | trial_index

Contexts keep independent uses of the same master seed apart (error
sweeps, capacity sweeps, channel profiling).
"""

from __future__ import annotations

import numpy as np

CTX_ERROR_SWEEP = 1
CTX_CAPACITY = 2
CTX_PROFILE = 3
CTX_GENERIC = 7


def substream(
    seed: int, context: int = CTX_GENERIC, point: int = 0, trial: int = 0
) -> np.random.Generator:
    """Deterministic per-(context, point, trial) generator."""
    if not 0 <= context < 1 << 16:
        raise ValueError("context out of range")
    if not 0 <= point < 1 << 16:
        raise ValueError("point index out of range")
    if not 0 <= trial < 1 << 32:
        raise ValueError("trial index out of range")
    path = (context << 48) | (point << 32) | trial
    key = np.array([np.uint64(seed & (1 << 64) - 1), np.uint64(path)])
    return np.random.Generator(np.random.Philox(key=key))


def as_generator(rng) -> np.random.Generator:
    """Accept a Generator or an integer master seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    return substream(int(rng))
