"""Optimizer estimators and the name registry used by the harness and CLI."""
from __future__ import annotations

from .base import BaseOptimizer, RunResult
from .basin import (
    BasinHopping,
    GenerationalBasinHopping,
    PopulationBasinHopping,
    perturb,
    roulette_pick,
)
from .cmaes import CMAES, default_pop_size
from .de import DifferentialEvolution, mutate_curr_to_best_1, mutate_rand_1
from .pso import ParticleSwarm
from .random_search import RandomSearch

ALGORITHMS: dict[str, type] = {
    "bh": BasinHopping,
    "bhpop": PopulationBasinHopping,
    "pbh": GenerationalBasinHopping,
    "de": DifferentialEvolution,
    "pso": ParticleSwarm,
    "cmaes": CMAES,
    "random": RandomSearch,
}

DEFAULT_ALGORITHMS = ("bh", "bhpop", "pbh", "de", "pso", "cmaes")


def make_optimizer(name: str, **params) -> BaseOptimizer:
    """Instantiate a registered optimizer by name with parameter overrides."""
    try:
        cls = ALGORITHMS[name]
    except KeyError:
        known = ", ".join(sorted(ALGORITHMS))
        raise ValueError(f"unknown algorithm {name!r}; known: {known}") from None
    return cls(**params)


__all__ = [
    "ALGORITHMS",
    "DEFAULT_ALGORITHMS",
    "BaseOptimizer",
    "BasinHopping",
    "CMAES",
    "DifferentialEvolution",
    "GenerationalBasinHopping",
    "ParticleSwarm",
    "PopulationBasinHopping",
    "RandomSearch",
    "RunResult",
    "default_pop_size",
    "make_optimizer",
    "mutate_curr_to_best_1",
    "mutate_rand_1",
    "perturb",
    "roulette_pick",
]
