"""Point-set generators: uniform box sampling and scrambled Hammersley sets."""
from __future__ import annotations

import math

import numpy as np

from .core import Array, Bounds


def uniform_in_bounds(bounds: Bounds, rng: np.random.Generator) -> Array:
    """One point uniform in the box, consuming exactly D draws."""
    return rng.uniform(bounds.lower, bounds.upper, bounds.dimension)


def first_primes(count: int) -> list[int]:
    primes: list[int] = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def scrambled_hammersley(
    n_points: int, dimension: int, rng: np.random.Generator
) -> Array:
    """Hammersley set in [0,1)^dimension with random digit scrambling.

    First coordinate is the regular grid i/n; the rest are radical inverses
    of i in successive prime bases, with an independent random permutation of
    the digit alphabet at every digit position (so trailing zeros are also
    displaced). Deterministic for a fixed generator state.
    """
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    points = np.empty((n_points, dimension))
    points[:, 0] = np.arange(n_points) / n_points
    if dimension == 1:
        return points
    for column, base in enumerate(first_primes(dimension - 1), start=1):
        # enough positions to cover the index digits plus scrambled tail
        depth = max(1, math.ceil(math.log(max(n_points, 2), base))) + 8
        perms = [rng.permutation(base) for _ in range(depth)]
        for i in range(n_points):
            value = 0.0
            scale = 1.0 / base
            k = i
            for pos in range(depth):
                digit = k % base
                k //= base
                value += perms[pos][digit] * scale
                scale /= base
            points[i, column] = value
    return points


def hammersley_in_bounds(
    n_points: int, bounds: Bounds, rng: np.random.Generator
) -> Array:
    """Scrambled Hammersley set mapped affinely into the box."""
    unit = scrambled_hammersley(n_points, bounds.dimension, rng)
    return bounds.lower + unit * bounds.width
