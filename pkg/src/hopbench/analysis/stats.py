"""Nonparametric tests used by the report generator.

Small samples take exact distribution paths (full enumeration of the test
statistic's null distribution); larger samples use the usual normal / chi2
approximations with tie and continuity corrections. Only the distribution
tail functions come from scipy; the statistics themselves are computed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.stats import chi2 as _chi2
from scipy.stats import norm as _norm
from scipy.stats import t as _t

__all__ = [
    "TestResult",
    "FriedmanResult",
    "average_ranks",
    "mann_whitney_u",
    "wilcoxon_signed_rank",
    "benjamini_hochberg",
    "friedman_conover",
]

MW_EXACT_LIMIT = 16  # combined sample size for the exact U distribution
WILCOXON_EXACT_LIMIT = 20  # pairs with nonzero differences

A_BETTER = "a_better"
B_BETTER = "b_better"
NO_DIRECTION = "none"


@dataclass(frozen=True)
class TestResult:
    """Outcome of a two-sample or paired test.

    ``direction`` says which sample tended to have *smaller* values (we
    minimize, so smaller is better); it is descriptive and independent of
    significance.
    """

    statistic: float
    p_value: float
    direction: str
    exact: bool


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """Ascending ranks starting at 1, ties sharing their average rank."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.shape[0], dtype=float)
    ordered = values[order]
    i = 0
    while i < ordered.shape[0]:
        j = i
        while j + 1 < ordered.shape[0] and ordered[j + 1] == ordered[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@lru_cache(maxsize=None)
def _u_counts(n1: int, n2: int) -> tuple[int, ...]:
    """Number of pooled orderings giving each U value, for tie-free data."""
    if n1 == 0 or n2 == 0:
        return (1,)
    with_a = _u_counts(n1 - 1, n2)  # last placed observation is from a
    with_b = _u_counts(n1, n2 - 1)  # last placed observation is from b
    counts = [0] * (n1 * n2 + 1)
    # Placing an ``a`` after everything adds n2 wins over every b.
    for u, c in enumerate(with_a):
        counts[u + n2] += c
    for u, c in enumerate(with_b):
        counts[u] += c
    return tuple(counts)


def _mw_exact_p(u_a: float, n1: int, n2: int) -> float:
    counts = _u_counts(n1, n2)
    total = sum(counts)
    u = int(round(u_a))
    below = sum(counts[: u + 1])
    above = sum(counts[u:])
    return min(1.0, 2.0 * min(below, above) / total)


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Two-sided Mann-Whitney U test.

    Exact when the pooled sample has at most ``MW_EXACT_LIMIT`` values and
    no ties; otherwise a normal approximation with tie and continuity
    corrections. The statistic is U for sample ``a`` (number of (a, b)
    pairs with a > b, ties counting one half).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n1, n2 = a.shape[0], b.shape[0]
    if n1 == 0 or n2 == 0:
        raise ValueError("both samples must be non-empty")
    pooled = np.concatenate([a, b])
    ranks = average_ranks(pooled)
    r_a = float(ranks[:n1].sum())
    u_a = r_a - n1 * (n1 + 1) / 2.0
    u_b = n1 * n2 - u_a

    _, tie_sizes = np.unique(pooled, return_counts=True)
    has_ties = bool((tie_sizes > 1).any())

    if n1 + n2 <= MW_EXACT_LIMIT and not has_ties:
        p = _mw_exact_p(u_a, n1, n2)
        exact = True
    else:
        n = n1 + n2
        mu = n1 * n2 / 2.0
        tie_term = float(((tie_sizes**3) - tie_sizes).sum())
        sigma_sq = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
        if sigma_sq <= 0.0:
            p = 1.0
        else:
            z = (u_a - mu - math.copysign(0.5, u_a - mu)) / math.sqrt(sigma_sq)
            if u_a == mu:
                z = 0.0
            p = min(1.0, 2.0 * float(_norm.sf(abs(z))))
        exact = False

    if u_a < u_b:
        direction = A_BETTER  # a won fewer pairs, i.e. tends smaller
    elif u_b < u_a:
        direction = B_BETTER
    else:
        direction = NO_DIRECTION
    return TestResult(statistic=u_a, p_value=p, direction=direction, exact=exact)


def _signed_rank_counts(doubled_ranks: Sequence[int]) -> np.ndarray:
    """Distribution of 2*W+ over all sign assignments."""
    total = int(sum(doubled_ranks))
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    for r in doubled_ranks:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: counts.shape[0] - r]
        counts = counts + shifted
    return counts


def wilcoxon_signed_rank(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped; if everything is zero the result is a
    no-op (p = 1). Exact for up to ``WILCOXON_EXACT_LIMIT`` nonzero pairs
    (enumerating all sign assignments, which handles tied ranks), normal
    approximation with tie and continuity corrections beyond that.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("paired samples must be 1-d and equally long")
    diffs = a - b
    diffs = diffs[diffs != 0.0]
    n = diffs.shape[0]
    if n == 0:
        return TestResult(
            statistic=0.0, p_value=1.0, direction=NO_DIRECTION, exact=True
        )
    ranks = average_ranks(np.abs(diffs))
    w_plus = float(ranks[diffs > 0].sum())
    w_minus = float(ranks[diffs < 0].sum())
    statistic = min(w_plus, w_minus)

    if n <= WILCOXON_EXACT_LIMIT:
        doubled = [int(round(2.0 * r)) for r in ranks]
        counts = _signed_rank_counts(doubled)
        total = counts.sum()
        w2 = int(round(2.0 * w_plus))
        below = counts[: w2 + 1].sum()
        above = counts[w2:].sum()
        p = min(1.0, 2.0 * float(min(below, above)) / float(total))
        exact = True
    else:
        mu = n * (n + 1) / 4.0
        _, tie_sizes = np.unique(ranks, return_counts=True)
        tie_term = float(((tie_sizes**3) - tie_sizes).sum())
        sigma_sq = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
        if sigma_sq <= 0.0:
            p = 1.0
        else:
            z = (w_plus - mu - math.copysign(0.5, w_plus - mu)) / math.sqrt(
                sigma_sq
            )
            if w_plus == mu:
                z = 0.0
            p = min(1.0, 2.0 * float(_norm.sf(abs(z))))
        exact = False

    if w_plus > w_minus:
        direction = B_BETTER  # a - b mostly positive: a is larger, b smaller
    elif w_minus > w_plus:
        direction = A_BETTER
    else:
        direction = NO_DIRECTION
    return TestResult(
        statistic=statistic, p_value=p, direction=direction, exact=exact
    )


def benjamini_hochberg(p_values: Sequence[float]) -> list[float]:
    """Step-up false-discovery-rate adjustment, preserving input order."""
    p = np.asarray(p_values, dtype=float)
    if p.ndim != 1 or p.shape[0] == 0:
        raise ValueError("p_values must be a non-empty 1-d sequence")
    if ((p < 0.0) | (p > 1.0)).any():
        raise ValueError("p-values must lie in [0, 1]")
    m = p.shape[0]
    order = np.argsort(p, kind="stable")
    adjusted = np.empty(m, dtype=float)
    smallest = 1.0
    for pos in range(m - 1, -1, -1):
        idx = order[pos]
        candidate = p[idx] * m / (pos + 1)
        smallest = min(smallest, candidate)
        adjusted[idx] = smallest
    return [float(v) for v in adjusted]


@dataclass(frozen=True)
class FriedmanResult:
    """Friedman omnibus test with Conover pairwise comparisons.

    ``posthoc_p`` is a symmetric k x k matrix of pairwise p-values
    (Benjamini-Hochberg adjusted when requested), with ones on the
    diagonal. ``degenerate`` marks the all-blocks-tied case where no
    ranking information exists.
    """

    statistic: float
    p_value: float
    df: int
    rank_sums: list[float]
    average_ranks: list[float]
    posthoc_p: list[list[float]]
    degenerate: bool


def friedman_conover(
    matrix: Sequence[Sequence[float]], adjust: bool = True
) -> FriedmanResult:
    """Tie-corrected Friedman test over blocks x treatments, plus Conover
    post-hoc pairwise comparisons on the rank sums."""
    data = np.asarray(matrix, dtype=float)
    if data.ndim != 2:
        raise ValueError("matrix must be 2-d (blocks x treatments)")
    n, k = data.shape
    if n < 2 or k < 2:
        raise ValueError("need at least 2 blocks and 2 treatments")
    ranks = np.vstack([average_ranks(row) for row in data])
    rank_sums = ranks.sum(axis=0)
    avg_ranks = rank_sums / n

    a1 = float((ranks**2).sum())
    c1 = n * k * (k + 1) ** 2 / 4.0
    spread = float(((rank_sums - n * (k + 1) / 2.0) ** 2).sum())

    if a1 <= c1:
        # Every block is fully tied: no ranking information at all.
        return FriedmanResult(
            statistic=0.0,
            p_value=1.0,
            df=k - 1,
            rank_sums=[float(v) for v in rank_sums],
            average_ranks=[float(v) for v in avg_ranks],
            posthoc_p=[[1.0] * k for _ in range(k)],
            degenerate=True,
        )

    statistic = (k - 1) * spread / (a1 - c1)
    p_value = float(_chi2.sf(statistic, k - 1))

    df = (n - 1) * (k - 1)
    scale = 2.0 * n * (a1 - c1) / df
    shrink = 1.0 - statistic / (n * (k - 1))
    pairs_p = []
    pair_index = []
    posthoc = [[1.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            gap = abs(float(rank_sums[i] - rank_sums[j]))
            if shrink <= 0.0:
                # Perfectly consistent rankings: distinct sums separate
                # with certainty, equal sums do not separate at all.
                p = 0.0 if gap > 0.0 else 1.0
            else:
                t_stat = gap / math.sqrt(scale * shrink)
                p = min(1.0, 2.0 * float(_t.sf(t_stat, df)))
            pairs_p.append(p)
            pair_index.append((i, j))
    if adjust and pairs_p:
        pairs_p = benjamini_hochberg(pairs_p)
    for (i, j), p in zip(pair_index, pairs_p):
        posthoc[i][j] = p
        posthoc[j][i] = p
    return FriedmanResult(
        statistic=float(statistic),
        p_value=p_value,
        df=k - 1,
        rank_sums=[float(v) for v in rank_sums],
        average_ranks=[float(v) for v in avg_ranks],
        posthoc_p=posthoc,
        degenerate=False,
    )
