"""Seeded sampling that other implementations can reproduce bit for bit.

The generator is SplitMix64 with its standard published
constants; shuffles are Fisher-Yates from the last index down, with
rejection sampling so every index is drawn without modulo bias.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil
from typing import Iterator, MutableSequence

import numpy as np

from .errors import BadDensity
from .space import PointSet, Space

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            z = self.next()
            if z < limit:
                return z % n

    def __iter__(self) -> Iterator[int]:
        while True:
            yield self.next()


def shuffle(seq: MutableSequence, seed: int) -> MutableSequence:
    """In-place Fisher-Yates: for i = n-1 .. 1 swap seq[i] with seq[below(i+1)]."""
    rng = SplitMix64(seed)
    for i in range(len(seq) - 1, 0, -1):
        j = rng.below(i + 1)
        seq[i], seq[j] = seq[j], seq[i]
    return seq


def check_density(density) -> Fraction:
    dens = Fraction(str(density)) if isinstance(density, float) else Fraction(density)
    if not 0 < dens <= 1:
        raise BadDensity(f"density must lie in (0, 1], got {density}")
    return dens


def sample_size(total: int, density) -> int:
    return ceil(check_density(density) * total)


def random_subset(space: Space, density, seed: int) -> PointSet:
    """The first ceil(density * q^d) points of a seeded shuffle of all indices.

    For a fixed seed the sets are nested in the density.
    """
    k = sample_size(space.size, density)
    order = shuffle(list(range(space.size)), seed)
    return PointSet(space, np.array(order[:k], dtype=np.int64))


def random_product(space: Space, density, seed: int) -> PointSet:
    """A^d where A is the first ceil(density * q) elements of a shuffled F_q."""
    q = space.q
    A = shuffle(list(range(q)), seed)[: sample_size(q, density)]
    grids = np.meshgrid(*([np.array(sorted(A), dtype=np.int64)] * space.d), indexing="ij")
    coords = np.stack([g.ravel() for g in grids], axis=1)
    return PointSet.from_coords(space, coords)
