"""Deterministic random streams derived from one 64-bit seed."""

from __future__ import annotations

import os
import zlib

import numpy as np


def _key(tag) -> int:
    if isinstance(tag, int):
        return tag & 0xFFFFFFFF
    return zlib.crc32(str(tag).encode())


def stream(seed: int, *tags) -> np.random.Generator:
    """Generator for (seed, tag, tag, ...); equal inputs give equal streams."""
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=tuple(_key(t) for t in tags))
    return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(int(rng))


def default_seed(seed=None) -> int:
    if seed is not None:
        return int(seed)
    env = os.environ.get("TLG_SEED")
    if env is None:
        raise ValueError("a seed is required (pass --seed or set TLG_SEED)")
    return int(env)
