"""Covariance matrix adaptation evolution strategy."""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..core import Evaluator
from ..validation import check_positive_int
from .base import BaseOptimizer


def default_pop_size(dimension: int) -> int:
    """Quadratic-in-D population: D^2/2 + D/2 + 3."""
    return dimension * (dimension + 1) // 2 + 3


class CMAES(BaseOptimizer):
    """CMA-ES with cumulative step-size adaptation and rank-one/rank-mu
    covariance updates.

    Offspring are sampled from N(mean, sigma^2 C) without bound handling;
    only the copy sent to the objective is clipped to the box, so the
    adaptation path sees the raw samples. Box constraints are enforced by
    two safeguards that are both inactive whenever the offspring are
    feasible: (1) feasible offspring are ranked by objective value and all
    infeasible offspring rank after them, ordered by squared distance to
    the box, and (2) the distribution mean is projected back into the box
    after recombination. Without these, two failure modes exist: the mean
    drifts outside and the step size collapses before it returns, freezing
    every sample on one boundary point; or boundary plateaus keep the
    evolution path directional and the step size diverges. The ordering
    makes both self-correcting: a feasible sample always outranks a clipped
    one, and when every sample is infeasible the smallest steps win, which
    shrinks the step size again. Selection weights are the normalized
    positive log-rank weights over the best ``n_parents`` offspring. The
    covariance eigendecomposition is refreshed every generation and
    eigenvalues are floored at 1e-14 of the largest to keep the sampler
    well defined.

    Defaults: ``pop_size`` D^2/2 + D/2 + 3, ``n_parents`` half of that, and
    ``sigma0`` 0.3 times the box width.
    """

    def __init__(
        self,
        pop_size: Optional[int] = None,
        n_parents: Optional[int] = None,
        sigma0: Optional[float] = None,
        max_evals: int = 200_000,
        target_error: float = 1e-8,
        random_state=None,
    ) -> None:
        self.pop_size = pop_size
        self.n_parents = n_parents
        self.sigma0 = sigma0
        self.max_evals = max_evals
        self.target_error = target_error
        self.random_state = random_state

    def _run(self, evaluator: Evaluator, rng: np.random.Generator) -> None:
        bounds = evaluator.problem.bounds
        dim = bounds.dimension
        lower, upper = bounds.lower, bounds.upper

        lam = (
            default_pop_size(dim)
            if self.pop_size is None
            else check_positive_int(self.pop_size, "pop_size")
        )
        mu = (
            max(1, lam // 2)
            if self.n_parents is None
            else check_positive_int(self.n_parents, "n_parents")
        )
        if mu > lam:
            raise ValueError("n_parents must not exceed pop_size")
        sigma = (
            0.3 * float(np.mean(bounds.width))
            if self.sigma0 is None
            else float(self.sigma0)
        )
        if not sigma > 0:
            raise ValueError("sigma0 must be positive")

        if mu == 1:
            weights = np.ones(1)
        else:
            raw = np.log((lam + 1) / 2.0) - np.log(np.arange(1, mu + 1))
            if raw[-1] <= 0:
                raise ValueError(
                    "n_parents too large for positive log-rank weights"
                )
            weights = raw / raw.sum()
        mueff = 1.0 / float(weights @ weights)

        cc = (4.0 + mueff / dim) / (dim + 4.0 + 2.0 * mueff / dim)
        cs = (mueff + 2.0) / (dim + mueff + 5.0)
        c1 = 2.0 / ((dim + 1.3) ** 2 + mueff)
        cmu = min(
            1.0 - c1,
            2.0 * (mueff - 2.0 + 1.0 / mueff) / ((dim + 2.0) ** 2 + mueff),
        )
        damps = (
            1.0 + 2.0 * max(0.0, math.sqrt((mueff - 1.0) / (dim + 1.0)) - 1.0) + cs
        )
        chi_n = math.sqrt(dim) * (1.0 - 1.0 / (4.0 * dim) + 1.0 / (21.0 * dim**2))

        mean = rng.uniform(lower, upper, dim)
        cov = np.eye(dim)
        basis = np.eye(dim)
        scales = np.ones(dim)
        inv_sqrt = np.eye(dim)
        path_c = np.zeros(dim)
        path_s = np.zeros(dim)
        generation = 0
        fitness = np.empty(lam)
        infeasibility = np.empty(lam)

        while not evaluator.stopped:
            normals = rng.standard_normal((lam, dim))
            steps = normals @ (basis * scales).T
            samples = mean + sigma * steps
            for k in range(lam):
                clipped = np.clip(samples[k], lower, upper)
                infeasibility[k] = float(np.sum((samples[k] - clipped) ** 2))
                fitness[k] = evaluator(clipped)
                self._report(clipped, fitness[k])
            # feasible offspring first (by f), then infeasible by distance
            order = np.lexsort((fitness, infeasibility))
            chosen = steps[order[:mu]]
            delta = weights @ chosen
            mean = np.clip(mean + sigma * delta, lower, upper)

            generation += 1
            path_s = (1.0 - cs) * path_s + math.sqrt(
                cs * (2.0 - cs) * mueff
            ) * (inv_sqrt @ delta)
            norm_ps = float(np.linalg.norm(path_s))
            h_sig = norm_ps / math.sqrt(
                1.0 - (1.0 - cs) ** (2 * generation)
            ) / chi_n < 1.4 + 2.0 / (dim + 1.0)
            path_c = (1.0 - cc) * path_c
            if h_sig:
                path_c = path_c + math.sqrt(cc * (2.0 - cc) * mueff) * delta

            # rank-one + rank-mu update; the (1 - h_sig) term offsets the
            # variance lost when the rank-one path update is suppressed
            c1a = c1 * (1.0 - (1.0 - float(h_sig)) * cc * (2.0 - cc))
            cov = (
                (1.0 - c1a - cmu) * cov
                + c1 * np.outer(path_c, path_c)
                + cmu * (chosen.T * weights) @ chosen
            )
            sigma *= math.exp(
                min(1.0, (cs / damps) * (norm_ps / chi_n - 1.0))
            )

            cov = (cov + cov.T) / 2.0
            eigenvalues, basis = np.linalg.eigh(cov)
            largest = float(eigenvalues[-1])
            if not (largest > 0 and math.isfinite(largest)):
                cov = np.eye(dim)
                basis = np.eye(dim)
                scales = np.ones(dim)
                inv_sqrt = np.eye(dim)
                continue
            eigenvalues = np.maximum(eigenvalues, 1e-14 * largest)
            scales = np.sqrt(eigenvalues)
            inv_sqrt = (basis / scales) @ basis.T
