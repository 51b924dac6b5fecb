"""Uniform random sampling baseline."""
from __future__ import annotations

import numpy as np

from ..core import Evaluator
from ..sampling import uniform_in_bounds
from .base import BaseOptimizer


class RandomSearch(BaseOptimizer):
    """Independent uniform draws; the floor for overhead and quality."""

    def __init__(
        self,
        max_evals: int = 200_000,
        target_error: float = 1e-8,
        random_state=None,
    ) -> None:
        self.max_evals = max_evals
        self.target_error = target_error
        self.random_state = random_state

    def _run(self, evaluator: Evaluator, rng: np.random.Generator) -> None:
        while True:
            x = uniform_in_bounds(evaluator.problem.bounds, rng)
            self._report(x, evaluator(x))
