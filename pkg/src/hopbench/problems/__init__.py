"""Problem definitions: synthetic suite, atomic clusters, and plugins.

External problems can be registered by name and then used anywhere a
problem name is accepted, which allows substituting an official benchmark
implementation for the built-in suite.
"""
from __future__ import annotations

from typing import Callable, Optional

from ..core import Array, Bounds, Problem
from .clusters import (
    BUDGET_FACTOR,
    CLUSTER_KINDS,
    COINCIDENT_PENALTY,
    cluster_cap,
    default_coord_bound,
    lj_energy,
    make_cluster_problem,
    morse_energy,
)
from .suite import (
    DOMAIN_HIGH,
    DOMAIN_LOW,
    FUNCTION_IDS,
    FUNCTION_LABELS,
    GROUPS,
    group_of,
    instance_seed,
    make_instance,
)

_plugins: dict[str, Problem] = {}


def _is_reserved(name: str) -> bool:
    if name in {f"f{i}" for i in FUNCTION_IDS}:
        return True
    prefix, _, tail = name.partition("_")
    return prefix in ("LJ", "MO") and tail.isdigit()


def register_problem(
    name: str,
    bounds: Bounds,
    objective: Callable[[Array], float],
    known_optimum: Optional[float] = None,
) -> Problem:
    """Register an external problem under a unique, non-reserved name."""
    if _is_reserved(name):
        raise ValueError(f"{name!r} is reserved for built-in problems")
    if name in _plugins:
        raise ValueError(f"problem {name!r} is already registered")
    problem = Problem(
        name=name, bounds=bounds, objective=objective, known_optimum=known_optimum
    )
    _plugins[name] = problem
    return problem


def unregister_problem(name: str) -> None:
    _plugins.pop(name, None)


def registered_problems() -> tuple[str, ...]:
    return tuple(sorted(_plugins))


def get_problem(name: str) -> Problem:
    """Look up a registered (plugin) problem by name."""
    try:
        return _plugins[name]
    except KeyError:
        raise KeyError(f"no registered problem named {name!r}") from None


def problem_catalog() -> list[dict]:
    """Rows describing every available problem family, for display."""
    rows = [
        {
            "name": f"f{fid}",
            "kind": "suite",
            "group": group_of(fid),
            "label": FUNCTION_LABELS[fid],
        }
        for fid in FUNCTION_IDS
    ]
    rows.append(
        {
            "name": "LJ_<atoms>",
            "kind": "cluster",
            "group": "lennard-jones",
            "label": "pair potential 4(r^-12 - r^-6)",
        }
    )
    rows.append(
        {
            "name": "MO_<atoms>",
            "kind": "cluster",
            "group": "morse (rho = 6)",
            "label": "pair potential e^a(e^a - 2), a = rho(1 - r)",
        }
    )
    for name in registered_problems():
        problem = _plugins[name]
        rows.append(
            {
                "name": name,
                "kind": "plugin",
                "group": f"D={problem.dimension}",
                "label": "externally registered",
            }
        )
    return rows


__all__ = [
    "BUDGET_FACTOR",
    "CLUSTER_KINDS",
    "COINCIDENT_PENALTY",
    "DOMAIN_HIGH",
    "DOMAIN_LOW",
    "FUNCTION_IDS",
    "FUNCTION_LABELS",
    "GROUPS",
    "cluster_cap",
    "default_coord_bound",
    "get_problem",
    "group_of",
    "instance_seed",
    "lj_energy",
    "make_cluster_problem",
    "make_instance",
    "morse_energy",
    "problem_catalog",
    "register_problem",
    "registered_problems",
    "unregister_problem",
]
