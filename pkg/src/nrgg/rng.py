"""Deterministic counter-based random streams.

Every random draw in this package comes from a SplitMix64 stream.  The
generator is counter-based: output i of the stream with seed s is

    mix64(s + (i + 1) * GOLDEN)   (all arithmetic mod 2**64)

where mix64 is the SplitMix64 finalizer.  This gives random access (any
index can be evaluated without generating its predecessors), which the
perturbation sampler relies on, and it is frozen: these exact constants
and this exact composition are part of the reproducibility contract.

Uniforms in [0, 1) are the top 53 bits scaled by 2**-53.
"""
from __future__ import annotations

import numpy as np

MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 2.0 ** -53


def mix64(x: int) -> int:
    """SplitMix64 finalizer of a single 64-bit value."""
    x &= 0xFFFFFFFFFFFFFFFF
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & 0xFFFFFFFFFFFFFFFF
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & 0xFFFFFFFFFFFFFFFF
    return (x ^ (x >> 31)) & 0xFFFFFFFFFFFFFFFF


def combine(*parts: int) -> int:
    """Fold integers into one 64-bit seed.

    Used to derive sub-stream seeds, e.g. combine(master_seed, n, trial).
    Chained finalizer applications; order-sensitive by construction.
    """
    h = 0x8F1BBCDCBFA53E0B
    for p in parts:
        h = mix64(h ^ mix64(p & 0xFFFFFFFFFFFFFFFF))
    return h


def stream_u64(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs [start, start+count) of the seed's stream, vectorised."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    x = (np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * GOLDEN) & MASK64
    x = (x ^ (x >> np.uint64(30))) * _MIX1 & MASK64
    x = (x ^ (x >> np.uint64(27))) * _MIX2 & MASK64
    return (x ^ (x >> np.uint64(31))) & MASK64


def stream_u64_at(seed: int, idx: np.ndarray) -> np.ndarray:
    """Random-access evaluation of the stream at the given indices."""
    idx = np.asarray(idx, dtype=np.uint64)
    x = (np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + (idx + np.uint64(1)) * GOLDEN) & MASK64
    x = (x ^ (x >> np.uint64(30))) * _MIX1 & MASK64
    x = (x ^ (x >> np.uint64(27))) * _MIX2 & MASK64
    return (x ^ (x >> np.uint64(31))) & MASK64


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """float64 uniforms in [0, 1) at stream positions [start, start+count)."""
    return (stream_u64(seed, start, count) >> np.uint64(11)).astype(np.float64) * _U53


def uniforms_at(seed: int, idx: np.ndarray) -> np.ndarray:
    """Random-access uniforms in [0, 1) at the given stream indices."""
    return (stream_u64_at(seed, idx) >> np.uint64(11)).astype(np.float64) * _U53
