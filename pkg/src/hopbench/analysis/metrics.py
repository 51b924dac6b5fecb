"""Fixed-budget and fixed-target metrics over run records.

All metrics are simple deterministic walks over the recorded improvement
events, written so a brute-force recomputation from raw trajectories gives
bit-identical results.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ..harness import RunRecord


def ok_error_records(records: Iterable[RunRecord]) -> list[RunRecord]:
    """Keep successful known-optimum runs; warn about everything else."""
    kept = []
    failed = 0
    for record in records:
        if record.status != "ok":
            failed += 1
        elif record.final_error is not None:
            kept.append(record)
    if failed:
        warnings.warn(
            f"excluding {failed} failed runs from analysis", RuntimeWarning
        )
    return kept


def error_at_budget(record: RunRecord, budget: int) -> float:
    """Best recorded error once ``budget`` evaluations have been spent."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if not record.events:
        raise ValueError(
            f"record {record.algo}/{record.problem} has an empty trajectory"
        )
    best: Optional[float] = None
    for index, value in record.events:
        if index > budget:
            break
        best = value
    if best is None:
        raise ValueError("trajectory starts after the requested budget")
    return best


def hitting_time(record: RunRecord, target: float) -> float:
    """First evaluation index whose best error is <= target, else inf."""
    if not target >= 0.0:
        raise ValueError("target must be nonnegative")
    for index, value in record.events:
        if value <= target:
            return index
    return math.inf


def sr_ar_ert(
    times: Sequence[float], cap: int
) -> tuple[float, float, float]:
    """Success rate, average runtime (capped), and expected runtime.

    ``times`` are hitting times (finite or inf). AR averages min(T, cap);
    ERT = AR / SR, infinite when nothing succeeded.
    """
    if not times:
        raise ValueError("times must be non-empty")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n = len(times)
    successes = sum(1 for t in times if math.isfinite(t))
    sr = successes / n
    ar = sum(min(t, cap) for t in times) / n
    ert = ar / sr if sr > 0 else math.inf
    return sr, ar, ert


def logscore(value: float, best: float, base: Optional[float] = None) -> float:
    """log(value / best); natural log unless a base is given."""
    if not value > 0 or not best > 0:
        raise ValueError("logscore needs positive value and best")
    score = math.log(value / best)
    if base is not None:
        score /= math.log(base)
    return score


def pooled_best_errors(
    records: Iterable[RunRecord], budget: int
) -> dict[tuple[str, int, int], float]:
    """Best error over every record in the same (problem, dim, instance)."""
    best: dict[tuple[str, int, int], float] = {}
    for record in records:
        key = (record.problem, record.dim, record.instance)
        value = error_at_budget(record, budget)
        if key not in best or value < best[key]:
            best[key] = value
    return best


@dataclass(frozen=True)
class ScoreRow:
    algo: str
    problem: str
    dim: int
    instance: int
    run: int
    errors: dict[int, float]
    hits: dict[float, float]
    logscore: float


@dataclass(frozen=True)
class ScoreTable:
    budgets: tuple[int, ...]
    targets: tuple[float, ...]
    rows: list[ScoreRow]


def build_score_table(
    records: Iterable[RunRecord],
    budgets: Sequence[int],
    targets: Sequence[float],
) -> ScoreTable:
    """Per-run errors at each budget, hitting times at each target, and the
    logscore at the largest budget against the instance-pooled best."""
    if not budgets or not targets:
        raise ValueError("budgets and targets must be non-empty")
    records = ok_error_records(records)
    top = max(budgets)
    best = pooled_best_errors(records, top)
    rows = []
    for record in records:
        value = error_at_budget(record, top)
        rows.append(
            ScoreRow(
                algo=record.algo,
                problem=record.problem,
                dim=record.dim,
                instance=record.instance,
                run=record.run,
                errors={int(b): error_at_budget(record, b) for b in budgets},
                hits={float(t): hitting_time(record, t) for t in targets},
                logscore=logscore(
                    value, best[(record.problem, record.dim, record.instance)]
                ),
            )
        )
    return ScoreTable(
        budgets=tuple(int(b) for b in budgets),
        targets=tuple(float(t) for t in targets),
        rows=rows,
    )


def ecdf_curve(
    records: Sequence[RunRecord],
    targets: Sequence[float],
    eval_grid: Sequence[int],
) -> list[float]:
    """Fraction of (run, target) pairs attained within each grid budget."""
    if not records or not targets:
        raise ValueError("records and targets must be non-empty")
    times = [
        hitting_time(record, target)
        for record in records
        for target in targets
    ]
    total = len(times)
    return [sum(1 for t in times if t <= e) / total for e in eval_grid]


def value_at_budget(record: RunRecord, budget: int) -> float:
    """Best-so-far raw value at a budget, for records without an optimum."""
    return error_at_budget(record, budget)
