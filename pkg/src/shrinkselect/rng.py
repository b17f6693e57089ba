"""Seed handling.

Every stochastic routine takes a ``seed`` that may be an int, a
``numpy.random.SeedSequence`` or a tuple of ints. Sub-streams are derived by
appending integers to the spawn key, so a stream depends only on its key and
never on how many streams were drawn before it.
"""

from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[int, tuple, np.random.SeedSequence]


def as_seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, tuple):
        root, *keys = seed
        return np.random.SeedSequence(int(root), spawn_key=tuple(int(k) for k in keys))
    if isinstance(seed, (int, np.integer)) and not isinstance(seed, bool):
        return np.random.SeedSequence(int(seed))
    raise TypeError(f"unsupported seed type: {type(seed).__name__}")


def substream(seed: SeedLike, *keys: int) -> np.random.SeedSequence:
    """Counter-based child of ``seed``; pure, unlike ``SeedSequence.spawn``."""
    ss = as_seed_sequence(seed)
    return np.random.SeedSequence(ss.entropy, spawn_key=tuple(ss.spawn_key) + tuple(int(k) for k in keys))


def generator(seed: SeedLike, *keys: int) -> np.random.Generator:
    return np.random.default_rng(substream(seed, *keys))
