"""Atomic cluster potential-energy problems (Lennard-Jones and Morse).

A cluster of N atoms is encoded as the flat coordinate vector
(x1, y1, z1, ..., xN, yN, zN) inside a cubic box. Energies are sums over
atom pairs; the global minimum value is not known to the problem definition,
so runs always exhaust their budget and trajectories track raw values.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.spatial.distance import pdist

from ..core import Array, Bounds, Problem

COINCIDENT_PENALTY = 1e10
BUDGET_FACTOR = 20_000
_EXP_CAP = 700.0

CLUSTER_KINDS = ("lj", "mo")


def lj_energy(coords: Array) -> float:
    """Lennard-Jones energy, epsilon = sigma = 1: 4 sum (r^-12 - r^-6).

    The pair minimum is -1 at r = 2^(1/6). Coincident or overflow-close
    atoms return a large finite penalty instead of infinity.
    """
    positions = np.asarray(coords, dtype=float).reshape(-1, 3)
    squared = pdist(positions, "sqeuclidean")
    if not squared.all():
        return COINCIDENT_PENALTY
    with np.errstate(over="ignore"):
        inv6 = squared**-3
        energy = 4.0 * float(((inv6 - 1.0) * inv6).sum())
    if not math.isfinite(energy):
        return COINCIDENT_PENALTY
    return energy


def morse_energy(coords: Array, rho: float = 6.0) -> float:
    """Morse energy, epsilon = r_e = 1: sum e^(rho(1-r)) (e^(rho(1-r)) - 2).

    The pair minimum is -1 at r = 1. Exponents are capped at 700 before
    exponentiation; should the pair product still overflow (possible only
    for extreme ``rho``), the same large finite penalty as for coincident
    atoms is returned, so the energy is always finite.
    """
    positions = np.asarray(coords, dtype=float).reshape(-1, 3)
    distances = pdist(positions)
    exponents = np.minimum(rho * (1.0 - distances), _EXP_CAP)
    with np.errstate(over="ignore"):
        attract = np.exp(exponents)
        energy = float(((attract - 2.0) * attract).sum())
    if not math.isfinite(energy):
        return COINCIDENT_PENALTY
    return energy


def default_coord_bound(n_atoms: int) -> float:
    """Box half-width: 2.5 up to 40 atoms, growing as a cube root beyond."""
    if n_atoms <= 40:
        return 2.5
    return 2.5 * (n_atoms / 40.0) ** (1.0 / 3.0)


def cluster_cap(dimension: int) -> int:
    """Evaluation budget for a cluster problem of the given dimension."""
    return BUDGET_FACTOR * dimension


def make_cluster_problem(
    kind: str,
    n_atoms: int,
    coord_bound: float | None = None,
    rho: float = 6.0,
) -> Problem:
    """Build the LJ_<n> or MO_<n> problem (kind 'lj' or 'mo')."""
    if kind not in CLUSTER_KINDS:
        raise ValueError(f"kind must be one of {CLUSTER_KINDS}, got {kind!r}")
    if n_atoms < 2:
        raise ValueError("n_atoms must be >= 2")
    half_width = (
        default_coord_bound(n_atoms) if coord_bound is None else float(coord_bound)
    )
    if not half_width > 0:
        raise ValueError("coord_bound must be positive")
    dimension = 3 * n_atoms
    bounds = Bounds.cube(-half_width, half_width, dimension)
    if kind == "lj":
        name = f"LJ_{n_atoms}"
        objective = lj_energy
    else:
        name = f"MO_{n_atoms}"
        if not rho > 0:
            raise ValueError("rho must be positive")

        def objective(coords: Array, _rho=float(rho)) -> float:
            return morse_energy(coords, _rho)

    return Problem(name=name, bounds=bounds, objective=objective)
