"""Estimator scaffolding shared by all optimizers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator

from ..core import (
    Array,
    EvalBudget,
    Evaluator,
    Problem,
    StopRun,
    Trajectory,
)
from ..validation import check_positive_int, check_problem, check_rng


@dataclass(frozen=True)
class RunResult:
    """Outcome of one optimization run.

    ``best_x``/``best_f`` is the solution the algorithm reports (for basin
    hopping always a local minimum); ``best_value`` is the raw best objective
    over every evaluation, and ``best_error`` its clipped precision error when
    the problem has a known optimum.
    """

    best_x: Array
    best_f: float
    best_value: float
    best_error: Optional[float]
    trajectory: Trajectory
    n_evals: int


class BaseOptimizer(BaseEstimator):
    """Base class: subclasses implement ``_run(evaluator, rng)``.

    ``fit(problem)`` executes one budgeted run and stores the outcome in
    ``best_x_``, ``best_f_``, ``best_error_``, ``trajectory_``, ``n_evals_``
    and ``result_``. The run ends when the evaluation cap is spent or the
    target error is reached, whichever comes first.
    """

    def fit(self, problem: Problem) -> "BaseOptimizer":
        problem = check_problem(problem)
        cap = check_positive_int(self.max_evals, "max_evals")
        budget = EvalBudget(cap, float(self.target_error))
        rng = check_rng(self.random_state)
        evaluator = Evaluator(problem, budget)
        self._best_x: Optional[Array] = None
        self._best_f = math.inf
        try:
            self._run(evaluator, rng)
        except StopRun:
            pass
        trajectory = evaluator.trajectory
        trajectory.final_evals = budget.used
        if evaluator.best_x is None:
            raise RuntimeError("run ended without a single evaluation")
        if self._best_x is None:
            self._best_x = evaluator.best_x
            self._best_f = evaluator.best_f
        best_error = (
            evaluator.best_error if problem.known_optimum is not None else None
        )
        self.best_x_ = np.asarray(self._best_x, dtype=float)
        self.best_f_ = float(self._best_f)
        self.best_error_ = best_error
        self.trajectory_ = trajectory
        self.n_evals_ = budget.used
        self.result_ = RunResult(
            best_x=self.best_x_,
            best_f=self.best_f_,
            best_value=evaluator.best_f,
            best_error=best_error,
            trajectory=trajectory,
            n_evals=budget.used,
        )
        return self

    def _run(self, evaluator: Evaluator, rng: np.random.Generator) -> None:
        raise NotImplementedError

    def _report(self, x: Array, f: float) -> None:
        """Offer a candidate as the algorithm-level solution."""
        if f < self._best_f:
            self._best_f = f
            self._best_x = np.array(x, dtype=float)
