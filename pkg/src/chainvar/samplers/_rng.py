"""Seed handling shared by all samplers.

Every sampler accepts an integer seed, a ``numpy.random.SeedSequence``, or
a ready ``numpy.random.Generator``; integers and seed sequences are fed to
``numpy.random.default_rng`` (PCG64).  Replication r of an experiment uses
the stream ``SeedSequence(master_seed, spawn_key=(0, r))`` and the
long-run pseudo-truth run uses ``spawn_key=(1,)``, so the two families can
never collide.  Identical seeds give bit-identical chains.
"""

from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def replication_stream(master_seed: int, index: int) -> np.random.SeedSequence:
    """Independent stream for replication ``index`` of a harness run."""
    if index < 0:
        raise ValueError(f"replication index must be >= 0, got {index}")
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(0, index))


def truth_stream(master_seed: int) -> np.random.SeedSequence:
    """Reserved stream for the long-run pseudo-truth simulation."""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(1,))
