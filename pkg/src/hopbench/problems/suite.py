"""Synthetic benchmark suite: 24 functions in five difficulty groups.

Each (function_id, dimension, instance) triple deterministically defines a
problem on [-5, 5]^D: a random shift places the optimum, functions 6-24 add
a random rotation, and a random offset (uniform in [-1000, 1000], rounded to
two decimals) is added to the value and declared as ``known_optimum``. The
construction guarantees the declared optimum is attained exactly at the
shift, so precision errors are measurable down to zero.

Groups by id: 1-5 separable, 6-9 low conditioning, 10-14 high conditioning
unimodal, 15-19 multimodal with strong structure, 20-24 multimodal with weak
structure.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..core import Array, Bounds, Problem, make_rng, mix_seed

FUNCTION_IDS = tuple(range(1, 25))
DOMAIN_LOW = -5.0
DOMAIN_HIGH = 5.0

GROUPS: dict[str, tuple[int, int]] = {
    "separable": (1, 5),
    "low_conditioning": (6, 9),
    "high_conditioning": (10, 14),
    "multimodal_structured": (15, 19),
    "multimodal_weak": (20, 24),
}

FUNCTION_LABELS: dict[int, str] = {
    1: "sphere",
    2: "separable ellipsoid",
    3: "separable Rastrigin",
    4: "skew separable Rastrigin",
    5: "linear slope",
    6: "attractive sector",
    7: "step ellipsoid",
    8: "rotated Rosenbrock",
    9: "rotated quadratic",
    10: "rotated ellipsoid",
    11: "discus",
    12: "bent cigar",
    13: "sharp ridge",
    14: "sum of different powers",
    15: "rotated Rastrigin",
    16: "multiscale cosine sum",
    17: "pair-norm ripple",
    18: "ill-conditioned pair-norm ripple",
    19: "composite valley ripple",
    20: "deceptive sine wells",
    21: "many-peaks field",
    22: "few-peaks field",
    23: "digit-fraction product",
    24: "double-funnel Rastrigin",
}

_INSTANCE_SALT = 81251


def group_of(function_id: int) -> str:
    for name, (low, high) in GROUPS.items():
        if low <= function_id <= high:
            return name
    raise ValueError(f"function_id must be in 1..24, got {function_id}")


def _random_rotation(dim: int, rng: np.random.Generator) -> Array:
    """Orthogonal matrix from the QR of a Gaussian matrix, sign-fixed."""
    matrix = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(matrix)
    return q * np.sign(np.diag(r))


def _powers(dim: int, decades: float) -> Array:
    """Per-coordinate scales 10^(decades * i / (D-1)), i = 0..D-1."""
    return 10.0 ** (decades * np.arange(dim) / (dim - 1))


def _uniform_shift(dim: int, rng: np.random.Generator) -> Array:
    return rng.uniform(-4.0, 4.0, dim)


def _signs(dim: int, rng: np.random.Generator) -> Array:
    return np.where(rng.random(dim) < 0.5, -1.0, 1.0)


# Builders return (core, shift) where core acts on z = x - shift and is
# exactly zero at z = 0, nonnegative on the box.


def _build_sphere(dim, rng):
    shift = _uniform_shift(dim, rng)

    def core(z: Array) -> float:
        return float(z @ z)

    return core, shift


def _build_separable_ellipsoid(dim, rng):
    shift = _uniform_shift(dim, rng)
    scales = _powers(dim, 6.0)

    def core(z: Array) -> float:
        return float(scales @ (z * z))

    return core, shift


def _rastrigin(u: Array) -> float:
    return float(10.0 * (u.size - np.cos(2.0 * math.pi * u).sum()) + u @ u)


def _build_separable_rastrigin(dim, rng):
    shift = _uniform_shift(dim, rng)
    scales = _powers(dim, 0.5)

    def core(z: Array) -> float:
        return _rastrigin(scales * z)

    return core, shift


def _build_skew_rastrigin(dim, rng):
    shift = _uniform_shift(dim, rng)
    scales = _powers(dim, 0.5)
    odd = np.arange(dim) % 2 == 0

    def core(z: Array) -> float:
        u = scales * z
        u = np.where(odd & (u > 0), 10.0 * u, u)
        return _rastrigin(u)

    return core, shift


def _build_linear_slope(dim, rng):
    signs = _signs(dim, rng)
    shift = DOMAIN_HIGH * signs
    slopes = signs * _powers(dim, 1.0)

    def core(z: Array) -> float:
        return float(-(slopes @ z))

    return core, shift


def _build_attractive_sector(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)

    def core(z: Array) -> float:
        y = rot @ z
        scaled = np.where(y > 0, 100.0 * y, y)
        return float((scaled @ scaled) ** 0.9)

    return core, shift


def _build_step_ellipsoid(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)
    scales = _powers(dim, 2.0)

    def core(z: Array) -> float:
        y = rot @ z
        coarse = np.floor(0.5 + y)
        fine = np.floor(0.5 + 10.0 * y) / 10.0
        stepped = np.where(np.abs(y) > 0.5, coarse, fine)
        return float(0.1 * max(abs(y[0]) / 1e4, scales @ (stepped * stepped)))

    return core, shift


def _build_rotated_rosenbrock(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)
    stretch = max(1.0, math.sqrt(dim) / 8.0)

    def core(z: Array) -> float:
        y = stretch * (rot @ z) + 1.0
        front, back = y[:-1], y[1:]
        return float(
            (100.0 * (front * front - back) ** 2 + (front - 1.0) ** 2).sum()
        )

    return core, shift


def _build_rotated_quadratic(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)
    scales = _powers(dim, 3.0)

    def core(z: Array) -> float:
        y = rot @ z
        return float(scales @ (y * y))

    return core, shift


def _build_rotated_ellipsoid(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)
    scales = _powers(dim, 6.0)

    def core(z: Array) -> float:
        y = rot @ z
        return float(scales @ (y * y))

    return core, shift


def _build_discus(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)

    def core(z: Array) -> float:
        y = rot @ z
        return float(1e6 * y[0] * y[0] + y[1:] @ y[1:])

    return core, shift


def _build_bent_cigar(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)

    def core(z: Array) -> float:
        y = rot @ z
        return float(y[0] * y[0] + 1e6 * (y[1:] @ y[1:]))

    return core, shift


def _build_sharp_ridge(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)

    def core(z: Array) -> float:
        y = rot @ z
        return float(y[0] * y[0] + 100.0 * math.sqrt(y[1:] @ y[1:]))

    return core, shift


def _build_different_powers(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)
    exponents = 2.0 + 4.0 * np.arange(dim) / (dim - 1)

    def core(z: Array) -> float:
        y = rot @ z
        return float(math.sqrt((np.abs(y) ** exponents).sum()))

    return core, shift


def _build_rotated_rastrigin(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)
    scales = _powers(dim, 0.5)

    def core(z: Array) -> float:
        return _rastrigin(scales * (rot @ z))

    return core, shift


_WSCALES = 0.5 ** np.arange(12)
_WFREQS = 2.0 * math.pi * 3.0 ** np.arange(12)
_WFLOOR = float(_WSCALES @ np.cos(_WFREQS * 0.5))


def _build_multiscale_cosines(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)

    def core(z: Array) -> float:
        y = rot @ z
        waves = np.cos(np.outer(y + 0.5, _WFREQS)) @ _WSCALES
        return float(10.0 * (waves.mean() - _WFLOOR) ** 3)

    return core, shift


def _build_pair_norm_ripple(decades: float):
    def build(dim, rng):
        shift = _uniform_shift(dim, rng)
        rot = _random_rotation(dim, rng)
        scales = _powers(dim, decades)

        def core(z: Array) -> float:
            u = scales * (rot @ z)
            s = np.sqrt(u[:-1] ** 2 + u[1:] ** 2)
            ripple = np.sqrt(s) * (1.0 + np.sin(50.0 * s**0.2) ** 2)
            return float(ripple.mean() ** 2)

        return core, shift

    return build


def _build_composite_valley(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)
    stretch = max(1.0, math.sqrt(dim) / 8.0)

    def core(z: Array) -> float:
        u = stretch * (rot @ z) + 1.0
        front, back = u[:-1], u[1:]
        q = 100.0 * (front * front - back) ** 2 + (front - 1.0) ** 2
        return float(
            (10.0 / (dim - 1)) * (q / 4000.0 - np.cos(q)).sum() + 10.0
        )

    return core, shift


_WELL_CENTER = 420.9687462275036
_WELL_VALUE = _WELL_CENTER * math.sin(math.sqrt(_WELL_CENTER))


def _build_deceptive_sine_wells(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)

    def core(z: Array) -> float:
        u = _WELL_CENTER - 100.0 * (rot @ z)
        au = np.abs(u)
        inside = (_WELL_VALUE - u * np.sin(np.sqrt(au))) / 100.0
        spill = np.maximum(0.0, au - 500.0)
        return float(inside.sum() + (spill * spill).sum() / 10.0)

    return core, shift


def _build_peaks_field(n_peaks: int):
    def build(dim, rng):
        shift = _uniform_shift(dim, rng)
        rot = _random_rotation(dim, rng)
        centers_x = rng.uniform(-4.9, 4.9, (n_peaks, dim))
        centers_x[0] = shift
        heights = np.empty(n_peaks)
        heights[0] = 10.0
        heights[1:] = 1.1 + 8.0 * np.arange(n_peaks - 1) / max(1, n_peaks - 2)
        conditions = np.empty(n_peaks)
        conditions[0] = 1000.0
        conditions[1:] = 10.0 ** rng.uniform(0.0, 3.0, n_peaks - 1)
        grades = np.arange(dim) / (dim - 1)
        quadratics = (
            conditions[:, None] ** grades[None, :]
            / conditions[:, None] ** 0.25
        )
        rotated_centers = (centers_x - shift) @ rot.T

        def core(z: Array) -> float:
            y = rot @ z
            diffs = y[None, :] - rotated_centers
            exponents = (diffs * diffs * quadratics).sum(axis=1) / (2.0 * dim)
            best = float((heights * np.exp(-exponents)).max())
            return (10.0 - best) ** 2

        return core, shift

    return build


_KPOW = 2.0 ** np.arange(1, 33)
_KINV = 1.0 / _KPOW


def _build_digit_fraction_product(dim, rng):
    shift = _uniform_shift(dim, rng)
    rot = _random_rotation(dim, rng)
    ranks = 1.0 + np.arange(dim)
    exponent = 10.0 / dim**1.2
    coeff = 10.0 / dim**2

    def core(z: Array) -> float:
        y = rot @ z
        grid = np.outer(_KPOW, y)
        fractions = _KINV @ np.abs(grid - np.round(grid))
        product = float(np.prod((1.0 + ranks * fractions) ** exponent))
        return coeff * (product - 1.0)

    return core, shift


def _build_double_funnel(dim, rng):
    signs = _signs(dim, rng)
    mu0 = 2.5
    shift = (mu0 / 2.0) * signs
    rot = _random_rotation(dim, rng)
    s = 1.0 - 1.0 / (2.0 * math.sqrt(dim + 20.0) - 8.2)
    mu1 = -math.sqrt((mu0 * mu0 - 1.0) / s)

    def core(z: Array) -> float:
        t = 2.0 * signs * z
        bowl = float(t @ t)
        off = t + (mu0 - mu1)
        rival = dim + s * float(off @ off)
        ripple = 10.0 * (dim - np.cos(2.0 * math.pi * (rot @ t)).sum())
        return min(bowl, rival) + float(ripple)

    return core, shift


_BUILDERS: dict[int, Callable] = {
    1: _build_sphere,
    2: _build_separable_ellipsoid,
    3: _build_separable_rastrigin,
    4: _build_skew_rastrigin,
    5: _build_linear_slope,
    6: _build_attractive_sector,
    7: _build_step_ellipsoid,
    8: _build_rotated_rosenbrock,
    9: _build_rotated_quadratic,
    10: _build_rotated_ellipsoid,
    11: _build_discus,
    12: _build_bent_cigar,
    13: _build_sharp_ridge,
    14: _build_different_powers,
    15: _build_rotated_rastrigin,
    16: _build_multiscale_cosines,
    17: _build_pair_norm_ripple(1.0),
    18: _build_pair_norm_ripple(3.0),
    19: _build_composite_valley,
    20: _build_deceptive_sine_wells,
    21: _build_peaks_field(101),
    22: _build_peaks_field(21),
    23: _build_digit_fraction_product,
    24: _build_double_funnel,
}


def instance_seed(function_id: int, dimension: int, instance: int) -> int:
    """Instance randomness is fixed by ids alone, never by the run seed."""
    return mix_seed(_INSTANCE_SALT, function_id, dimension, instance)


def make_instance(function_id: int, dimension: int, instance: int = 0) -> Problem:
    """Build the deterministic problem for (function_id, dimension, instance)."""
    if function_id not in _BUILDERS:
        raise ValueError(f"function_id must be in 1..24, got {function_id}")
    if dimension < 2:
        raise ValueError("dimension must be >= 2")
    if instance < 0:
        raise ValueError("instance must be >= 0")
    rng = make_rng(instance_seed(function_id, dimension, instance))
    offset = round(float(rng.uniform(-1000.0, 1000.0)), 2)
    core, shift = _BUILDERS[function_id](dimension, rng)
    shift = np.asarray(shift, dtype=float)
    shift.flags.writeable = False

    def objective(x: Array) -> float:
        z = np.asarray(x, dtype=float) - shift
        return core(z) + offset

    return Problem(
        name=f"f{function_id}",
        bounds=Bounds.cube(DOMAIN_LOW, DOMAIN_HIGH, dimension),
        objective=objective,
        known_optimum=offset,
        instance=instance,
        optimum_x=shift,
    )
