"""Particle swarm optimization, basic synchronous variant."""
from __future__ import annotations

import math

import numpy as np

from ..core import Evaluator
from ..sampling import uniform_in_bounds
from ..validation import check_positive_int
from .base import BaseOptimizer

DEFAULT_INERTIA = 1.0 / (2.0 * math.log(2.0))
DEFAULT_ACCEL = 0.5 + math.log(2.0)


class ParticleSwarm(BaseOptimizer):
    """Velocity-driven swarm with per-coordinate random scaling.

    Velocities start at zero. Each iteration draws r1, r2 ~ U[0,1]
    independently per particle and per coordinate and updates

        v <- inertia * v + cognitive * r1 * (pbest - x)
                         + social    * r2 * (gbest - x)
        x <- clip(x + v)

    Per-coordinate draws are the standard choice: they let the swarm move
    each coordinate independently, which is what gives PSO its strength on
    separable problems (and costs it on rotated ones). Personal and global
    bests are refreshed synchronously after the whole sweep. A particle
    sitting on the global best with zero velocity stays put.
    """

    def __init__(
        self,
        pop_size: int = 40,
        inertia: float = DEFAULT_INERTIA,
        cognitive: float = DEFAULT_ACCEL,
        social: float = DEFAULT_ACCEL,
        max_evals: int = 200_000,
        target_error: float = 1e-8,
        random_state=None,
    ) -> None:
        self.pop_size = pop_size
        self.inertia = inertia
        self.cognitive = cognitive
        self.social = social
        self.max_evals = max_evals
        self.target_error = target_error
        self.random_state = random_state

    def _run(self, evaluator: Evaluator, rng: np.random.Generator) -> None:
        n = check_positive_int(self.pop_size, "pop_size")
        for name in ("inertia", "cognitive", "social"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and nonnegative")

        bounds = evaluator.problem.bounds
        lower, upper = bounds.lower, bounds.upper

        positions = np.empty((n, bounds.dimension))
        velocities = np.zeros((n, bounds.dimension))
        values = np.empty(n)
        for i in range(n):
            positions[i] = uniform_in_bounds(bounds, rng)
            values[i] = evaluator(positions[i])
            self._report(positions[i], values[i])
        pbest = positions.copy()
        pbest_values = values.copy()
        leader = int(np.argmin(pbest_values))
        gbest = pbest[leader].copy()
        gbest_value = pbest_values[leader]

        while not evaluator.stopped:
            r1 = rng.random((n, bounds.dimension))
            r2 = rng.random((n, bounds.dimension))
            velocities = (
                self.inertia * velocities
                + self.cognitive * r1 * (pbest - positions)
                + self.social * r2 * (gbest - positions)
            )
            positions = np.clip(positions + velocities, lower, upper)
            for i in range(n):
                values[i] = evaluator(positions[i])
                self._report(positions[i], values[i])
                if values[i] < pbest_values[i]:
                    pbest_values[i] = values[i]
                    pbest[i] = positions[i].copy()
            leader = int(np.argmin(pbest_values))
            if pbest_values[leader] < gbest_value:
                gbest_value = pbest_values[leader]
                gbest = pbest[leader].copy()
