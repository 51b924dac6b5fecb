"""Basin hopping and its population variants.

All three share the same move: perturb a solution uniformly within a fixed
fraction of the box width, then descend to a local minimum with a bounded
local search. They differ in what they perturb and what they keep.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..core import Array, Bounds, Evaluator
from ..local_search import LBFGSB
from ..sampling import hammersley_in_bounds, uniform_in_bounds
from ..validation import check_positive_int
from .base import BaseOptimizer


def perturb(
    x: Array, bounds: Bounds, scale: float, rng: np.random.Generator
) -> Array:
    """Uniform move within +-scale/2 of the box width per coordinate, clipped.

    With scale 0.1 on [-5, 5]^D each coordinate moves by U[-0.5, 0.5].
    """
    if not 0.0 < scale <= 1.0:
        raise ValueError("scale must be in (0, 1]")
    half = 0.5 * scale * bounds.width
    moved = x + rng.uniform(-half, half, bounds.dimension)
    return np.clip(moved, bounds.lower, bounds.upper)


def roulette_pick(values, rng: np.random.Generator) -> int:
    """Fitness-proportionate index pick for minimization.

    Weights are (worst - value) + delta with delta = 1e-12 + 1e-6 * spread,
    so the current worst keeps a small positive weight. Equal values fall
    back to a uniform pick; a single candidate is returned without consuming
    any randomness.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    if n == 1:
        return 0
    worst = values.max()
    spread = worst - values.min()
    if spread <= 0.0:
        return int(rng.integers(n))
    weights = (worst - values) + (1e-12 + 1e-6 * spread)
    cumulative = np.cumsum(weights)
    u = rng.random() * cumulative[-1]
    return min(int(np.searchsorted(cumulative, u, side="right")), n - 1)


class BasinHopping(BaseOptimizer):
    """Single-solution basin hopping (perturb, minimize, accept).

    ``acceptance="monotonic"`` accepts only strict improvements;
    ``"metropolis"`` also accepts worse minima with probability
    exp(-beta * (f_new - f_current)). The reported solution is the best local
    minimum encountered, which under monotonic acceptance is the incumbent.
    """

    def __init__(
        self,
        perturb_scale: float = 0.1,
        acceptance: str = "monotonic",
        beta: float = 1.0,
        local_minimizer=None,
        max_evals: int = 200_000,
        target_error: float = 1e-8,
        random_state=None,
    ) -> None:
        self.perturb_scale = perturb_scale
        self.acceptance = acceptance
        self.beta = beta
        self.local_minimizer = local_minimizer
        self.max_evals = max_evals
        self.target_error = target_error
        self.random_state = random_state

    def _run(self, evaluator: Evaluator, rng: np.random.Generator) -> None:
        if self.acceptance not in ("monotonic", "metropolis"):
            raise ValueError(
                "acceptance must be 'monotonic' or 'metropolis', "
                f"got {self.acceptance!r}"
            )
        beta = float(self.beta)
        if self.acceptance == "metropolis" and not (
            beta > 0 and math.isfinite(beta)
        ):
            raise ValueError("beta must be positive and finite")
        bounds = evaluator.problem.bounds
        minimizer = (
            self.local_minimizer if self.local_minimizer is not None else LBFGSB()
        )

        start = uniform_in_bounds(bounds, rng)
        result = minimizer.minimize(evaluator, start)
        x, f_x = result.x_min, result.f_min
        self._report(x, f_x)
        while not evaluator.stopped:
            candidate = perturb(x, bounds, self.perturb_scale, rng)
            result = minimizer.minimize(evaluator, candidate)
            z, f_z = result.x_min, result.f_min
            self._report(z, f_z)
            if f_z < f_x:
                x, f_x = z, f_z
            elif self.acceptance == "metropolis" and math.isfinite(f_z):
                if rng.random() < math.exp(-beta * (f_z - f_x)):
                    x, f_x = z, f_z


class PopulationBasinHopping(BaseOptimizer):
    """Steady-state population of local minima with roulette selection.

    Each iteration perturbs and minimizes one member (roulette-selected by
    fitness gap); the result replaces the current worst member only if
    strictly better, and a successful entrant is the next solution perturbed.
    When the whole population collapses to one value, the worst
    ``floor(restart_fraction * N)`` members are re-drawn uniformly and
    re-minimized. With ``pop_size=1`` the behavior reduces exactly to
    monotonic basin hopping.
    """

    def __init__(
        self,
        pop_size: Optional[int] = None,
        perturb_scale: float = 0.1,
        restart_fraction: float = 2.0 / 3.0,
        equal_tol: float = 1e-12,
        local_minimizer=None,
        max_evals: int = 200_000,
        target_error: float = 1e-8,
        random_state=None,
    ) -> None:
        self.pop_size = pop_size
        self.perturb_scale = perturb_scale
        self.restart_fraction = restart_fraction
        self.equal_tol = equal_tol
        self.local_minimizer = local_minimizer
        self.max_evals = max_evals
        self.target_error = target_error
        self.random_state = random_state

    def _run(self, evaluator: Evaluator, rng: np.random.Generator) -> None:
        bounds = evaluator.problem.bounds
        dim = bounds.dimension
        n = (
            max(10, dim)
            if self.pop_size is None
            else check_positive_int(self.pop_size, "pop_size")
        )
        if not 0.0 <= self.restart_fraction < 1.0:
            raise ValueError("restart_fraction must be in [0, 1)")
        if not self.equal_tol >= 0.0:
            raise ValueError("equal_tol must be nonnegative")
        minimizer = (
            self.local_minimizer if self.local_minimizer is not None else LBFGSB()
        )

        members: list[Array] = []
        values = np.empty(n)
        for i in range(n):
            start = uniform_in_bounds(bounds, rng)
            result = minimizer.minimize(evaluator, start)
            members.append(result.x_min)
            values[i] = result.f_min
            self._report(result.x_min, result.f_min)
            if evaluator.stopped:
                return

        n_restart = int(self.restart_fraction * n)
        entrant: Optional[Array] = None
        while not evaluator.stopped:
            if n > 1:
                best = values.min()
                collapsed = bool(
                    (np.abs(values - best) <= self.equal_tol * max(1.0, abs(best))).all()
                )
                if collapsed and n_restart >= 1:
                    worst_first = np.argsort(values, kind="stable")[::-1]
                    for i in worst_first[:n_restart]:
                        start = uniform_in_bounds(bounds, rng)
                        result = minimizer.minimize(evaluator, start)
                        members[i] = result.x_min
                        values[i] = result.f_min
                        self._report(result.x_min, result.f_min)
                        if evaluator.stopped:
                            return
                    entrant = None

            if entrant is None:
                selected = members[roulette_pick(values, rng)]
            else:
                selected = entrant
            candidate = perturb(selected, bounds, self.perturb_scale, rng)
            result = minimizer.minimize(evaluator, candidate)
            self._report(result.x_min, result.f_min)
            worst = int(np.argmax(values))
            if result.f_min < values[worst]:
                members[worst] = result.x_min
                values[worst] = result.f_min
                entrant = result.x_min
            else:
                entrant = None


class GenerationalBasinHopping(BaseOptimizer):
    """Generational population basin hopping with nearest-value replacement.

    The population starts from a scrambled Hammersley set, locally minimized.
    Every generation perturbs and minimizes all members; each new minimum
    competes against the current member whose objective value is nearest
    (lowest index on ties, replacements immediately visible within the
    generation) and replaces it only if strictly better. There is no distance
    cutoff: the nearest-value member is always the one challenged.
    """

    def __init__(
        self,
        pop_size: Optional[int] = None,
        perturb_scale: float = 0.1,
        local_minimizer=None,
        max_evals: int = 200_000,
        target_error: float = 1e-8,
        random_state=None,
    ) -> None:
        self.pop_size = pop_size
        self.perturb_scale = perturb_scale
        self.local_minimizer = local_minimizer
        self.max_evals = max_evals
        self.target_error = target_error
        self.random_state = random_state

    def _run(self, evaluator: Evaluator, rng: np.random.Generator) -> None:
        bounds = evaluator.problem.bounds
        n = (
            max(10, bounds.dimension)
            if self.pop_size is None
            else check_positive_int(self.pop_size, "pop_size")
        )
        minimizer = (
            self.local_minimizer if self.local_minimizer is not None else LBFGSB()
        )

        starts = hammersley_in_bounds(n, bounds, rng)
        members: list[Array] = []
        values = np.empty(n)
        for i in range(n):
            result = minimizer.minimize(evaluator, starts[i])
            members.append(result.x_min)
            values[i] = result.f_min
            self._report(result.x_min, result.f_min)
            if evaluator.stopped:
                return

        while not evaluator.stopped:
            offspring: list[Array] = []
            offspring_values = np.empty(n)
            for i in range(n):
                candidate = perturb(members[i], bounds, self.perturb_scale, rng)
                result = minimizer.minimize(evaluator, candidate)
                offspring.append(result.x_min)
                offspring_values[i] = result.f_min
                self._report(result.x_min, result.f_min)
                if evaluator.stopped:
                    return
            for i in range(n):
                nearest = int(np.argmin(np.abs(values - offspring_values[i])))
                if offspring_values[i] < values[nearest]:
                    members[nearest] = offspring[i]
                    values[nearest] = offspring_values[i]
