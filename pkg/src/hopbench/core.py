"""Shared primitives: bounds, problems, budgets, trajectories, seeding.

Every objective call in a run goes through :class:`Evaluator`, which charges
the budget, tracks the best value seen, records improvement events, and stops
the run (via :class:`StopRun`) on budget exhaustion or target attainment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

Array = np.ndarray

_MASK64 = (1 << 64) - 1
_GOLDEN64 = 0x9E3779B97F4A7C15


class StopRun(Exception):
    """Control-flow signal that ends an optimization run."""


class BudgetExhausted(StopRun):
    """Raised when an evaluation is requested but the budget is spent."""


class TargetReached(StopRun):
    """Raised right after the evaluation that reaches the target error."""


class ObjectiveError(ValueError):
    """Raised when an objective returns a non-finite value."""


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned box constraints with finite, strictly ordered edges."""

    lower: Array
    upper: Array

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.ndim != 1 or upper.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("bounds must be 1-d arrays of equal length")
        if lower.size == 0:
            raise ValueError("bounds must have at least one coordinate")
        if not (np.isfinite(lower).all() and np.isfinite(upper).all()):
            raise ValueError("bounds must be finite")
        if not (lower < upper).all():
            raise ValueError("each lower bound must be strictly below the upper")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def cube(cls, low: float, high: float, dimension: int) -> "Bounds":
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def width(self) -> Array:
        return self.upper - self.lower

    def contains(self, x: Array, tol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool((x >= self.lower - tol).all() and (x <= self.upper + tol).all())

    def clip(self, x: Array) -> Array:
        return np.clip(x, self.lower, self.upper)


def clip_to_bounds(x: Array, bounds: Bounds) -> Array:
    """Project ``x`` onto the box. Idempotent; feasible input comes back equal."""
    return np.clip(np.asarray(x, dtype=float), bounds.lower, bounds.upper)


@dataclass(frozen=True)
class Problem:
    """A box-constrained minimization target.

    ``known_optimum`` is the exact minimum value when available; runs on such
    problems track precision error ``f(x) - known_optimum`` and may terminate
    early on a target. Problems without it (e.g. atomic clusters) track raw
    best-so-far values and always run to budget exhaustion.
    """

    name: str
    bounds: Bounds
    objective: Callable[[Array], float]
    known_optimum: Optional[float] = None
    instance: int = 0
    optimum_x: Optional[Array] = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("problem name must be non-empty")
        if not callable(self.objective):
            raise TypeError("objective must be callable")
        if self.known_optimum is not None and not math.isfinite(self.known_optimum):
            raise ValueError("known_optimum must be finite when given")
        if self.optimum_x is not None:
            location = np.asarray(self.optimum_x, dtype=float)
            if location.shape != (self.bounds.dimension,):
                raise ValueError("optimum_x must match the bounds dimension")
            object.__setattr__(self, "optimum_x", location)

    @property
    def dimension(self) -> int:
        return self.bounds.dimension


class EvalBudget:
    """Evaluation allowance for one run: hard cap plus optional error target."""

    __slots__ = ("cap", "target_error", "used")

    def __init__(self, cap: int, target_error: float = 0.0) -> None:
        cap = int(cap)
        if cap < 1:
            raise ValueError("cap must be a positive integer")
        target_error = float(target_error)
        if not (target_error >= 0.0 and math.isfinite(target_error)):
            raise ValueError("target_error must be finite and nonnegative")
        self.cap = cap
        self.target_error = target_error
        self.used = 0

    @property
    def remaining(self) -> int:
        return self.cap - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.cap


class Trajectory:
    """Improvement events of one run: (eval_index, best) pairs.

    ``best`` is the clipped best-so-far error on problems with a known
    optimum, the raw best-so-far objective value otherwise. Indices are
    strictly increasing and the best figure strictly decreasing.
    """

    __slots__ = ("events", "final_evals")

    def __init__(self) -> None:
        self.events: list[tuple[int, float]] = []
        self.final_evals = 0

    def record(self, eval_index: int, best: float) -> None:
        if eval_index < 1:
            raise ValueError("eval_index must be >= 1")
        if self.events:
            last_index, last_best = self.events[-1]
            if eval_index <= last_index:
                raise ValueError("events must have strictly increasing indices")
            if not best < last_best:
                raise ValueError("events must strictly improve")
        self.events.append((eval_index, float(best)))

    @property
    def best(self) -> Optional[float]:
        """Latest (smallest) recorded best figure, None before any event."""
        return self.events[-1][1] if self.events else None

    def __len__(self) -> int:
        return len(self.events)


class Evaluator:
    """Budgeted gateway to a problem's objective.

    Raises :class:`BudgetExhausted` (budget untouched) when no evaluations
    remain, and :class:`TargetReached` immediately after the evaluation that
    brings the error to or below ``budget.target_error``; the hitting
    evaluation is charged and recorded first. Non-finite objective values
    raise :class:`ObjectiveError` after being charged.
    """

    __slots__ = (
        "problem",
        "budget",
        "trajectory",
        "best_x",
        "best_f",
        "best_error",
        "stop_reason",
        "_objective",
        "_optimum",
    )

    def __init__(
        self,
        problem: Problem,
        budget: EvalBudget,
        trajectory: Optional[Trajectory] = None,
    ) -> None:
        self.problem = problem
        self.budget = budget
        self.trajectory = trajectory if trajectory is not None else Trajectory()
        self.best_x: Optional[Array] = None
        self.best_f = math.inf
        self.best_error = math.inf
        self.stop_reason: Optional[str] = None
        self._objective = problem.objective
        self._optimum = problem.known_optimum

    @property
    def stopped(self) -> bool:
        """True once no further evaluation can be charged.

        Covers both an explicit stop (target hit, budget raise already
        signalled) and a budget that the last evaluation consumed exactly,
        so driver loops never start an iteration they cannot pay for.
        """
        return self.stop_reason is not None or self.budget.exhausted

    def __call__(self, x: Array) -> float:
        if self.stop_reason == "target":
            raise TargetReached(self.problem.name)
        budget = self.budget
        if budget.used >= budget.cap:
            self.stop_reason = "budget"
            raise BudgetExhausted(self.problem.name)
        budget.used += 1
        value = float(self._objective(x))
        if not math.isfinite(value):
            raise ObjectiveError(
                f"objective of {self.problem.name!r} returned {value!r}"
            )
        if value < self.best_f:
            self.best_f = value
            self.best_x = np.array(x, dtype=float)
            if self._optimum is None:
                self.trajectory.record(budget.used, value)
            else:
                error = value - self._optimum
                if error < budget.target_error:
                    error = budget.target_error
                if error < self.best_error:
                    self.best_error = error
                    self.trajectory.record(budget.used, error)
                    if error <= budget.target_error:
                        self.stop_reason = "target"
                        raise TargetReached(self.problem.name)
        return value


def mix_seed(*parts: int) -> int:
    """Avalanche integer parts into one 64-bit seed (splitmix64 chain).

    Nearby tuples map to decorrelated seeds, so per-run streams built from
    (master_seed, algorithm, problem, dimension, instance, run) never overlap
    in any structured way.
    """
    state = 0x243F6A8885A308D3
    for part in parts:
        state = (state + (int(part) & _MASK64) + _GOLDEN64) & _MASK64
        z = state
        z ^= z >> 30
        z = (z * 0xBF58476D1CE4E5B9) & _MASK64
        z ^= z >> 27
        z = (z * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        state = z
    return state


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator for a mixed 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed))
