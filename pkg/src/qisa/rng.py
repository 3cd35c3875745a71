"""Seeded random streams.

Every stream is numpy's Philox4x64-10 counter-based generator keyed by a
``(seed, stream)`` pair of 64-bit words, so shot ``i`` of a run and restart
``r`` of an anneal each own an independent, reproducible stream.
"""

from __future__ import annotations

import numpy as np

PRNG_ID = "philox4x64-10/key=(seed,stream)/v1"
_U64 = (1 << 64) - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= _U64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def philox(seed: int, stream: int = 0) -> np.random.Generator:
    key = np.array([check_seed(seed), int(stream) & _U64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
