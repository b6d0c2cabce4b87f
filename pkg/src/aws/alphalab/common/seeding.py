#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from typing import List, Sequence, Union

import numpy as np

SeedLike = Union[int, Sequence[int], np.random.SeedSequence]


def seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def child_rngs(seed: SeedLike, count: int) -> List[np.random.Generator]:
    """
    Hierarchical seeding: a master seed spawns ``count`` independent child streams. Child i is always the same
    stream for the same master seed, regardless of how many draws the siblings make.

    :param seed: Master seed or seed sequence.
    :param count: Number of child generators.
    :return: Independent generators in spawn order.
    """
    return [np.random.default_rng(child) for child in seed_sequence(seed).spawn(count)]
