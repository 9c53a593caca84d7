"""Seed derivation.

Every random stream in a run is a stable 64-bit hash of the base seed and
the stream's position, so results do not depend on worker scheduling.
"""
import hashlib
from typing import Optional

import numpy as np


def stable_hash64(*parts) -> int:
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(repr(part).encode())
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "big")


def drop_seed(base_seed: int, drop: int) -> int:
    return stable_hash64(base_seed, drop)


def agent_seed(drop_seed_value: int, agent: int) -> int:
    return stable_hash64(drop_seed_value, agent)


def stream(seed: int, purpose: Optional[str] = None) -> np.random.Generator:
    """A Generator for `seed`, or for a named sub-stream of it."""
    return np.random.default_rng(seed if purpose is None else stable_hash64(seed, purpose))
