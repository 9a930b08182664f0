"""Deterministic seed derivation.

Every random draw in the package flows through a numpy SeedSequence keyed
by a 64-bit master seed plus an integer spawn-key path, so any artifact is
reproducible from the master seed alone. The generator is numpy's default
PCG64.
"""

import numpy as np

# Spawn-key tags; keep values stable, they fix the byte layout of every
# reproducible artifact.
TAG_DIAG = 1
TAG_SUBSET = 2
TAG_POSITIONS = 3
TAG_NOISE = 4
TAG_SCATTERERS = 5
TAG_SCENE = 6
TAG_HASH = 7


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for the stream identified by (seed, key-path)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def derived_seed(seed: int, *key: int) -> int:
    """A 64-bit child seed for the stream identified by (seed, key-path)."""
    ss = np.random.SeedSequence(seed, spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])
