"""Bounded local minimizers used as the inner step of basin hopping.

The workhorse is a limited-memory BFGS with gradient projection onto the box
and a backtracking Armijo line search along the projected path; gradients are
forward finite differences charged to the run budget. A gradient-free
Nelder-Mead simplex is provided as a fallback.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from sklearn.base import BaseEstimator

from .core import Array, Bounds, ObjectiveError, StopRun
from .validation import check_positive_int

ARMIJO_C = 1e-4
_MAX_BACKTRACKS = 50
_CURVATURE_SKIP = 1e-10


@dataclass(frozen=True)
class LocalMinResult:
    """Outcome of one local minimization."""

    x_min: Array
    f_min: float
    evals_spent: int
    converged: bool


def fd_gradient(
    fn: Callable[[Array], float],
    x: Array,
    f_x: float,
    bounds: Bounds,
    step: float,
) -> Array:
    """Forward-difference gradient with per-coordinate scaled steps.

    Step j is ``step * max(1, |x[j]|)``, sign-flipped toward the interior when
    the probe would exceed the upper bound, so every probe stays feasible.
    Costs exactly D evaluations.
    """
    x = np.asarray(x, dtype=float)
    upper = bounds.upper
    grad = np.empty(x.size)
    probe = x.copy()
    for j in range(x.size):
        h = step * max(1.0, abs(x[j]))
        if x[j] + h > upper[j]:
            h = -h
        probe[j] = x[j] + h
        grad[j] = (fn(probe) - f_x) / h
        probe[j] = x[j]
    return grad


def _finish(
    evaluator,
    used_before: int,
    best_x: Array,
    best_f: float,
    converged: bool,
) -> LocalMinResult:
    """Build the result, reconciling a target hit with local best-tracking.

    The evaluation that reaches the run target is recorded by the evaluator
    and then interrupts the search, so the minimizer's own tracking never
    sees its value; a charged target stop can only be that hitting
    evaluation, so adopting the evaluator's best is exact.
    """
    spent = evaluator.budget.used - used_before
    if (
        spent > 0
        and evaluator.stop_reason == "target"
        and evaluator.best_f < best_f
    ):
        best_x = np.array(evaluator.best_x, dtype=float)
        best_f = float(evaluator.best_f)
    return LocalMinResult(
        x_min=best_x,
        f_min=best_f,
        evals_spent=spent,
        converged=converged,
    )


def _two_loop(grad: Array, history: deque) -> Array:
    """L-BFGS two-loop recursion: returns -H @ grad for the stored pairs."""
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(history):
        a = rho * float(s @ q)
        alphas.append(a)
        q -= a * y
    s_last, y_last, rho_last = history[-1]
    q *= float(s_last @ y_last) / float(y_last @ y_last)
    for (s, y, rho), a in zip(history, reversed(alphas)):
        b = rho * float(y @ q)
        q += (a - b) * s
    return -q


class LBFGSB(BaseEstimator):
    """Limited-memory BFGS with gradient projection onto box bounds.

    Stops on: projected-gradient max-norm <= ``grad_tol``, the iteration cap
    (``max_iters``, default 15 * D), a failed line search, a relative function
    decrease below ``f_rtol``, or budget exhaustion (returning the best point
    seen so far). Non-finite objective values abort the search and return the
    best point, unless the very first evaluation is non-finite. Curvature
    pairs that fail the positivity check are Powell-damped toward the current
    inverse-Hessian scale instead of discarded, keeping the update positive
    definite under the Armijo-only line search without distorting
    well-measured pairs.

    Parameters
    ----------
    memory : int, history size of the curvature pairs.
    grad_step : float or None, base finite-difference step
        (default sqrt(machine epsilon)).
    grad_tol : float, tolerance on the projected gradient max-norm.
    f_rtol : float, relative function-decrease stopping threshold.
    max_iters : int or None, gradient-iteration cap (default 15 * D).
    """

    def __init__(
        self,
        memory: int = 10,
        grad_step: Optional[float] = None,
        grad_tol: float = 1e-5,
        f_rtol: float = 1e-10,
        max_iters: Optional[int] = None,
    ) -> None:
        self.memory = memory
        self.grad_step = grad_step
        self.grad_tol = grad_tol
        self.f_rtol = f_rtol
        self.max_iters = max_iters

    def minimize(self, evaluator, x0: Array) -> LocalMinResult:
        bounds = evaluator.problem.bounds
        lower, upper = bounds.lower, bounds.upper
        memory = check_positive_int(self.memory, "memory")
        step = (
            math.sqrt(np.finfo(float).eps)
            if self.grad_step is None
            else float(self.grad_step)
        )
        if not step > 0:
            raise ValueError("grad_step must be positive")
        max_iters = (
            15 * bounds.dimension
            if self.max_iters is None
            else check_positive_int(self.max_iters, "max_iters")
        )

        used_before = evaluator.budget.used
        x = np.clip(np.asarray(x0, dtype=float), lower, upper)
        best_x = x.copy()
        best_f = math.inf
        converged = False
        evaluated_any = False

        def call(z: Array) -> float:
            nonlocal best_x, best_f, evaluated_any
            value = evaluator(z)
            evaluated_any = True
            if value < best_f:
                best_f = value
                best_x = z.copy()
            return value

        try:
            f_x = call(x)
            grad = fd_gradient(call, x, f_x, bounds, step)
            history: deque = deque(maxlen=memory)
            for _ in range(max_iters):
                at_lower = x <= lower
                at_upper = x >= upper
                active = (at_lower & (grad > 0)) | (at_upper & (grad < 0))
                projected = np.where(active, 0.0, grad)
                if np.abs(projected).max() <= self.grad_tol:
                    converged = True
                    break

                if history:
                    direction = _two_loop(grad, history)
                    direction[active] = 0.0
                    if float(grad @ direction) >= 0.0:
                        direction = -projected
                else:
                    direction = -projected

                alpha = 1.0
                accepted = False
                f_new = f_x
                x_new = x
                for _ in range(_MAX_BACKTRACKS):
                    x_new = np.clip(x + alpha * direction, lower, upper)
                    delta = x_new - x
                    slope = float(grad @ delta)
                    if slope < 0.0:
                        f_new = call(x_new)
                        if f_new <= f_x + ARMIJO_C * slope:
                            accepted = True
                            break
                    elif not delta.any():
                        break
                    alpha *= 0.5
                if not accepted:
                    break

                decrease = f_x - f_new
                small_decrease = decrease <= self.f_rtol * max(1.0, abs(f_x))
                grad_new = fd_gradient(call, x_new, f_new, bounds, step)
                s = x_new - x
                y = grad_new - grad
                sy = float(s @ y)
                if sy > _CURVATURE_SKIP * float(
                    np.linalg.norm(s) * np.linalg.norm(y)
                ):
                    history.append((s, y, 1.0 / sy))
                elif history:
                    # Powell damping: an Armijo-only line search cannot
                    # guarantee positive curvature, and discarding such pairs
                    # freezes the step scale on strongly curved valleys.
                    # Blend y toward the current inverse-Hessian scale just
                    # enough to restore safe curvature, leaving well-measured
                    # pairs (the branch above) untouched.
                    s_l, y_l, _ = history[-1]
                    gamma = float(s_l @ y_l) / float(y_l @ y_l)
                    s_b_s = float(s @ s) / gamma
                    theta = 0.8 * s_b_s / (s_b_s - sy)
                    y = theta * y + (1.0 - theta) * s / gamma
                    sy = float(s @ y)
                    history.append((s, y, 1.0 / sy))
                x, f_x, grad = x_new, f_new, grad_new
                if small_decrease:
                    break
        except StopRun:
            pass
        except ObjectiveError:
            if not evaluated_any:
                raise
        return _finish(evaluator, used_before, best_x, best_f, converged)


class NelderMead(BaseEstimator):
    """Downhill simplex with boundary clipping; gradient-free fallback.

    Coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.
    Reflected and expanded points are clipped into the box; contractions and
    shrinks stay feasible by convexity.
    """

    def __init__(
        self,
        f_tol: float = 1e-10,
        max_iters: Optional[int] = None,
        init_step: float = 0.05,
    ) -> None:
        self.f_tol = f_tol
        self.max_iters = max_iters
        self.init_step = init_step

    def minimize(self, evaluator, x0: Array) -> LocalMinResult:
        bounds = evaluator.problem.bounds
        lower, upper = bounds.lower, bounds.upper
        dim = bounds.dimension
        max_iters = (
            100 * dim
            if self.max_iters is None
            else check_positive_int(self.max_iters, "max_iters")
        )
        if not 0 < self.init_step < 1:
            raise ValueError("init_step must be in (0, 1)")

        used_before = evaluator.budget.used
        x0 = np.clip(np.asarray(x0, dtype=float), lower, upper)
        best_x = x0.copy()
        best_f = math.inf
        converged = False
        evaluated_any = False

        def call(z: Array) -> float:
            nonlocal best_x, best_f, evaluated_any
            value = evaluator(z)
            evaluated_any = True
            if value < best_f:
                best_f = value
                best_x = z.copy()
            return value

        try:
            simplex = [x0]
            width = bounds.width
            for j in range(dim):
                vertex = x0.copy()
                offset = self.init_step * width[j]
                vertex[j] = (
                    vertex[j] + offset
                    if vertex[j] + offset <= upper[j]
                    else vertex[j] - offset
                )
                simplex.append(vertex)
            values = [call(v) for v in simplex]

            for _ in range(max_iters):
                order = np.argsort(values, kind="stable")
                simplex = [simplex[i] for i in order]
                values = [values[i] for i in order]
                spread = values[-1] - values[0]
                if spread <= self.f_tol * max(1.0, abs(values[0])):
                    converged = True
                    break

                centroid = np.mean(simplex[:-1], axis=0)
                worst = simplex[-1]
                reflected = np.clip(centroid + (centroid - worst), lower, upper)
                f_reflected = call(reflected)
                if f_reflected < values[0]:
                    expanded = np.clip(
                        centroid + 2.0 * (centroid - worst), lower, upper
                    )
                    f_expanded = call(expanded)
                    if f_expanded < f_reflected:
                        simplex[-1], values[-1] = expanded, f_expanded
                    else:
                        simplex[-1], values[-1] = reflected, f_reflected
                elif f_reflected < values[-2]:
                    simplex[-1], values[-1] = reflected, f_reflected
                else:
                    if f_reflected < values[-1]:
                        contracted = centroid + 0.5 * (reflected - centroid)
                    else:
                        contracted = centroid - 0.5 * (centroid - worst)
                    f_contracted = call(contracted)
                    if f_contracted < min(f_reflected, values[-1]):
                        simplex[-1], values[-1] = contracted, f_contracted
                    else:
                        for i in range(1, len(simplex)):
                            simplex[i] = simplex[0] + 0.5 * (
                                simplex[i] - simplex[0]
                            )
                            values[i] = call(simplex[i])
        except StopRun:
            pass
        except ObjectiveError:
            if not evaluated_any:
                raise
        return _finish(evaluator, used_before, best_x, best_f, converged)
