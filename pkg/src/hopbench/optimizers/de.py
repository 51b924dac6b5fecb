"""Differential evolution with binomial crossover."""
from __future__ import annotations

import numpy as np

from ..core import Evaluator
from ..sampling import uniform_in_bounds
from ..validation import check_positive_int
from .base import BaseOptimizer

MUTATIONS = ("curr_to_best_1", "rand_1")


def mutate_rand_1(a, b, c, weight: float) -> np.ndarray:
    """Mutant v = a + F (b - c)."""
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    return a + weight * (b - c)


def mutate_curr_to_best_1(x, best, b, c, weight: float) -> np.ndarray:
    """Mutant v = x + F (best - x) + F (b - c)."""
    x, best, b, c = (np.asarray(v, dtype=float) for v in (x, best, b, c))
    return x + weight * (best - x) + weight * (b - c)


def _distinct_indices(
    rng: np.random.Generator, n: int, exclude: int, count: int
) -> np.ndarray:
    pool = np.delete(np.arange(n), exclude)
    return rng.choice(pool, size=count, replace=False)


class DifferentialEvolution(BaseOptimizer):
    """DE with sequential replacement and forced-index binomial crossover.

    Mutation variants:

    - ``curr_to_best_1``: v = x + F (best - x) + F (b - c), needs pop >= 3
    - ``rand_1``:         v = a + F (b - c),               needs pop >= 4

    with a, b, c distinct members different from x. The trial vector takes
    the mutant coordinate where a uniform draw falls below ``crossover_prob``
    or at one forced random index, is clipped to the box, and replaces x when
    not worse. Replacements are visible immediately within a generation.
    """

    def __init__(
        self,
        pop_size: int = 30,
        diff_weight: float = 0.8,
        crossover_prob: float = 0.5,
        mutation: str = "curr_to_best_1",
        max_evals: int = 200_000,
        target_error: float = 1e-8,
        random_state=None,
    ) -> None:
        self.pop_size = pop_size
        self.diff_weight = diff_weight
        self.crossover_prob = crossover_prob
        self.mutation = mutation
        self.max_evals = max_evals
        self.target_error = target_error
        self.random_state = random_state

    def _run(self, evaluator: Evaluator, rng: np.random.Generator) -> None:
        n = check_positive_int(self.pop_size, "pop_size")
        if self.mutation not in MUTATIONS:
            raise ValueError(
                f"mutation must be one of {MUTATIONS}, got {self.mutation!r}"
            )
        minimum_pop = 4 if self.mutation == "rand_1" else 3
        if n < minimum_pop:
            raise ValueError(
                f"mutation {self.mutation!r} needs pop_size >= {minimum_pop}, "
                f"got {n}"
            )
        weight = float(self.diff_weight)
        if not 0.0 < weight <= 2.0:
            raise ValueError("diff_weight must be in (0, 2]")
        cross = float(self.crossover_prob)
        if not 0.0 <= cross <= 1.0:
            raise ValueError("crossover_prob must be in [0, 1]")

        bounds = evaluator.problem.bounds
        lower, upper = bounds.lower, bounds.upper
        dim = bounds.dimension

        population = np.empty((n, dim))
        values = np.empty(n)
        for i in range(n):
            population[i] = uniform_in_bounds(bounds, rng)
            values[i] = evaluator(population[i])
            self._report(population[i], values[i])
        best = int(np.argmin(values))

        while not evaluator.stopped:
            for i in range(n):
                if self.mutation == "rand_1":
                    a, b, c = _distinct_indices(rng, n, i, 3)
                    mutant = mutate_rand_1(
                        population[a], population[b], population[c], weight
                    )
                else:
                    b, c = _distinct_indices(rng, n, i, 2)
                    mutant = mutate_curr_to_best_1(
                        population[i],
                        population[best],
                        population[b],
                        population[c],
                        weight,
                    )
                forced = int(rng.integers(dim))
                mask = rng.random(dim) < cross
                mask[forced] = True
                trial = np.where(mask, mutant, population[i])
                np.clip(trial, lower, upper, out=trial)
                f_trial = evaluator(trial)
                if f_trial <= values[i]:
                    population[i] = trial
                    values[i] = f_trial
                    self._report(trial, f_trial)
                    if f_trial < values[best]:
                        best = i
