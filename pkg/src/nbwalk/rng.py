"""Counter-based SplitMix64 generator.

The i-th 64-bit word of the stream keyed by ``seed`` is

    z = (seed + (i + 1) * 0x9E3779B97F4A7C15) mod 2**64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    word = z ^ (z >> 31)

A uniform float in [0, 1) is ``(word >> 11) * 2**-53`` and a uniform index
below ``k`` is ``min(floor(uniform * k), k - 1)``. Per-walker streams use the
key ``seed ^ mix(walker)`` where ``mix`` is the finalizer above applied to the
walker number. Everything is defined at the bit level so sequences replay
identically in any language.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MUL1 = 0xBF58476D1CE4E5B9
MUL2 = 0x94D049BB133111EB
_INV53 = 2.0**-53


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MUL1) & MASK64
    z = ((z ^ (z >> 27)) * MUL2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Key of the independent sub-stream number ``index``."""
    return (seed & MASK64) ^ mix64(index)


def word(seed: int, i: int) -> int:
    return mix64((seed & MASK64) + (i + 1) * GAMMA)


def uniform(seed: int, i: int) -> float:
    return (word(seed, i) >> 11) * _INV53


def below(seed: int, i: int, k: int) -> int:
    return min(int(uniform(seed, i) * k), k - 1)


class CounterRNG:
    """Sequential view of one stream: each draw advances the counter by one."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def next_word(self) -> int:
        w = word(self.seed, self.counter)
        self.counter += 1
        return w

    def random(self) -> float:
        return (self.next_word() >> 11) * _INV53

    def randbelow(self, k: int) -> int:
        if k <= 0:
            raise ValueError("k must be positive")
        return min(int(self.random() * k), k - 1)

    def shuffle(self, items: list) -> None:
        # Fisher-Yates from the back; draw j uniform in [0, i].
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]


# Vectorized counterparts over uint64 arrays (wrapping arithmetic).

def mix64_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MUL1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MUL2)
    return z ^ (z >> np.uint64(31))


def derive_seeds(seed: int, count: int) -> np.ndarray:
    idx = np.arange(count, dtype=np.uint64)
    return np.uint64(seed & MASK64) ^ mix64_array(idx)


def uniform_array(keys: np.ndarray, i: int) -> np.ndarray:
    offset = np.uint64(((i + 1) * GAMMA) & MASK64)
    with np.errstate(over="ignore"):
        z = keys + offset
    return (mix64_array(z) >> np.uint64(11)).astype(np.float64) * _INV53


def below_array(keys: np.ndarray, i: int, k: np.ndarray) -> np.ndarray:
    k = np.asarray(k, dtype=np.int64)
    idx = np.floor(uniform_array(keys, i) * k).astype(np.int64)
    return np.minimum(idx, k - 1)
