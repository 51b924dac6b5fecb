"""Input validation helpers shared by estimators and the harness."""
from __future__ import annotations

import numbers
from typing import Optional, Union

import numpy as np

from .core import Array, Bounds, Problem

RandomState = Union[None, int, np.random.Generator]


def as_float_vector(x, name: str = "x", dimension: Optional[int] = None) -> Array:
    """Coerce to a 1-d float array, checking finiteness and length."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-d vector, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} must be finite")
    if dimension is not None and arr.size != dimension:
        raise ValueError(f"{name} must have length {dimension}, got {arr.size}")
    return arr


def check_rng(random_state: RandomState) -> np.random.Generator:
    """Resolve None / int seed / Generator into a numpy Generator."""
    if random_state is None:
        return np.random.default_rng()
    if isinstance(random_state, np.random.Generator):
        return random_state
    if isinstance(random_state, numbers.Integral):
        return np.random.Generator(np.random.PCG64(int(random_state)))
    raise TypeError(
        "random_state must be None, an integer seed, or a numpy Generator, "
        f"got {type(random_state).__name__}"
    )


def check_problem(problem) -> Problem:
    if not isinstance(problem, Problem):
        raise TypeError(f"expected a Problem, got {type(problem).__name__}")
    return problem


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if not isinstance(value, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_in_bounds(x: Array, bounds: Bounds, name: str = "x") -> Array:
    x = as_float_vector(x, name=name, dimension=bounds.dimension)
    if not bounds.contains(x):
        raise ValueError(f"{name} lies outside the problem bounds")
    return x
