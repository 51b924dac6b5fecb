"""Report generation: turns raw run records into analysis tables.

Outputs (all under one directory):

- ``score_table.csv``      per-run errors, hitting times, and logscores
- ``logscore_D{dim}.csv``  per-function average logscores with significance
                           markers against a reference algorithm, plus an
                           Overall row with a paired signed-rank test
- ``sr_ert.csv``           success rate / average runtime / expected runtime
                           per (problem, dim, algorithm, target)
- ``ecdf_D{dim}.csv``      fraction of (run, target) pairs solved per budget
- ``friedman.json``        omnibus rank test, pairwise p-values, rank cliques
- ``conover_p.csv``        adjusted pairwise p-value matrix
- ``boxplots.csv``         logscore distribution stats per
                           (dim, group, algorithm, budget)
- ``convergence_curves.csv`` / ``cluster_summary.csv``  value-mode runs
- ``summary.json``         machine-readable digest of the above
"""
from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from ..harness import RunRecord
from ..problems.suite import FUNCTION_IDS, group_of
from .metrics import (
    build_score_table,
    ecdf_curve,
    error_at_budget,
    hitting_time,
    logscore,
    pooled_best_errors,
    sr_ar_ert,
)
from .stats import (
    A_BETTER,
    B_BETTER,
    FriedmanResult,
    friedman_conover,
    mann_whitney_u,
    wilcoxon_signed_rank,
)

__all__ = [
    "DEFAULT_BUDGETS",
    "DEFAULT_TARGETS",
    "ReportBundle",
    "eval_grid",
    "make_reports",
    "rank_cliques",
]

DEFAULT_BUDGETS = (1000, 10000, 50000, 100000, 200000)
DEFAULT_TARGETS = (1e-8, 1e-4, 1e-2, 1e-1, 1.0)
GRID_POINTS = 101

MARK_BETTER = "+"  # algorithm significantly better than the reference
MARK_WORSE = "-"
MARK_NONE = ""
MARK_REFERENCE = "ref"


def eval_grid(cap: int, points: int = GRID_POINTS) -> list[int]:
    """Log-spaced integer evaluation counts from 1 to the cap, inclusive."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    raw = np.logspace(0.0, math.log10(cap), points)
    grid = sorted(set(int(round(v)) for v in raw))
    grid = [max(1, min(cap, v)) for v in grid]
    return sorted(set(grid))


@dataclass(frozen=True)
class ReportBundle:
    """Paths of everything written plus the in-memory summary."""

    out_dir: Path
    paths: dict[str, Path] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)


def _problem_sort_key(name: str):
    if len(name) > 1 and name[0] == "f" and name[1:].isdigit():
        return (0, int(name[1:]), name)
    return (1, 0, name)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def _algo_order(records: Sequence[RunRecord]) -> list[str]:
    seen: dict[str, None] = {}
    for record in records:
        seen.setdefault(record.algo, None)
    return list(seen)


def _group_label(problem: str) -> str:
    if len(problem) > 1 and problem[0] == "f" and problem[1:].isdigit():
        fid = int(problem[1:])
        if fid in FUNCTION_IDS:
            return group_of(fid)
    return "other"


def rank_cliques(
    ordered: Sequence[str],
    posthoc: dict[str, dict[str, float]],
    alpha: float,
) -> list[list[str]]:
    """Maximal contiguous runs of rank-ordered algorithms whose pairwise
    comparisons are all non-significant."""
    n = len(ordered)
    reach = []
    for i in range(n):
        j = i
        while j + 1 < n and all(
            posthoc[ordered[p]][ordered[j + 1]] > alpha for p in range(i, j + 1)
        ):
            j += 1
        reach.append(j)
    cliques = []
    for i, j in enumerate(reach):
        if i > 0 and reach[i - 1] >= j:
            continue  # contained in the previous interval
        cliques.append(list(ordered[i : j + 1]))
    return cliques


def _marker(result, algo_is_a: bool, alpha: float) -> str:
    if result.p_value > alpha:
        return MARK_NONE
    better = A_BETTER if algo_is_a else B_BETTER
    worse = B_BETTER if algo_is_a else A_BETTER
    if result.direction == better:
        return MARK_BETTER
    if result.direction == worse:
        return MARK_WORSE
    return MARK_NONE


def make_reports(
    records: Sequence[RunRecord],
    out_dir,
    reference: str = "bhpop",
    alpha: float = 0.05,
    budgets: Sequence[int] = DEFAULT_BUDGETS,
    targets: Sequence[float] = DEFAULT_TARGETS,
) -> ReportBundle:
    """Build every analysis table from a set of run records."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    budgets = tuple(sorted(int(b) for b in set(budgets)))
    targets = tuple(sorted((float(t) for t in set(targets)), reverse=True))
    if not budgets or not targets:
        raise ValueError("budgets and targets must be non-empty")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    records = list(records)
    ok_records = [r for r in records if r.status == "ok"]
    n_failed = len(records) - len(ok_records)
    if n_failed:
        warnings.warn(
            f"excluding {n_failed} failed runs from reports", RuntimeWarning
        )
    error_records = [r for r in ok_records if r.final_error is not None]
    value_records = [r for r in ok_records if r.final_error is None]

    paths: dict[str, Path] = {}
    summary: dict = {
        "reference": reference,
        "alpha": alpha,
        "budgets": list(budgets),
        "targets": list(targets),
        "n_records": len(records),
        "n_failed": n_failed,
        "n_error_runs": len(error_records),
        "n_value_runs": len(value_records),
    }

    top = max(budgets)
    cap = top

    if error_records:
        _error_mode_reports(
            error_records,
            out_dir,
            paths,
            summary,
            reference,
            alpha,
            budgets,
            targets,
            cap,
        )
    if value_records:
        _value_mode_reports(value_records, out_dir, paths, summary)

    summary_path = out_dir / "summary.json"
    with open(summary_path, "w") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")
    paths["summary"] = summary_path
    return ReportBundle(out_dir=out_dir, paths=paths, summary=summary)


def _error_mode_reports(
    error_records: list[RunRecord],
    out_dir: Path,
    paths: dict[str, Path],
    summary: dict,
    reference: str,
    alpha: float,
    budgets: tuple[int, ...],
    targets: tuple[float, ...],
    cap: int,
) -> None:
    algos = _algo_order(error_records)
    dims = sorted({r.dim for r in error_records})
    problems = sorted({r.problem for r in error_records}, key=_problem_sort_key)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        table = build_score_table(error_records, budgets, targets)
    header = (
        ["algo", "problem", "dim", "instance", "run"]
        + [f"error_at_{b}" for b in table.budgets]
        + [f"evals_to_{t:g}" for t in table.targets]
        + ["logscore"]
    )
    rows = [
        [row.algo, row.problem, row.dim, row.instance, row.run]
        + [row.errors[b] for b in table.budgets]
        + [row.hits[t] for t in table.targets]
        + [row.logscore]
        for row in table.rows
    ]
    score_path = out_dir / "score_table.csv"
    _write_csv(score_path, header, rows)
    paths["score_table"] = score_path

    # Per-run logscores at the top budget, grouped for the tests below.
    by_cell: dict[tuple[str, int, str], list[float]] = {}
    for row in table.rows:
        by_cell.setdefault((row.problem, row.dim, row.algo), []).append(
            row.logscore
        )

    observed_cells = {(row.problem, row.dim) for row in table.rows}
    summary["logscore_tables"] = {}
    for dim in dims:
        dim_problems = [p for p in problems if (p, dim) in observed_cells]
        averages: dict[str, dict[str, float]] = {}
        markers: dict[str, dict[str, str]] = {}
        for problem in dim_problems:
            averages[problem] = {}
            markers[problem] = {}
            ref_scores = by_cell.get((problem, dim, reference))
            for algo in algos:
                scores = by_cell.get((problem, dim, algo))
                if not scores:
                    continue
                averages[problem][algo] = sum(scores) / len(scores)
                if algo == reference:
                    markers[problem][algo] = MARK_REFERENCE
                elif ref_scores:
                    result = mann_whitney_u(scores, ref_scores)
                    markers[problem][algo] = _marker(result, True, alpha)
                else:
                    markers[problem][algo] = MARK_NONE

        overall: dict[str, float] = {}
        overall_marker: dict[str, str] = {}
        for algo in algos:
            per_fn = [
                averages[p][algo] for p in dim_problems if algo in averages[p]
            ]
            if not per_fn:
                continue
            overall[algo] = sum(per_fn) / len(per_fn)
            if algo == reference:
                overall_marker[algo] = MARK_REFERENCE
                continue
            shared = [
                p
                for p in dim_problems
                if algo in averages[p] and reference in averages[p]
            ]
            if len(shared) >= 2:
                result = wilcoxon_signed_rank(
                    [averages[p][algo] for p in shared],
                    [averages[p][reference] for p in shared],
                )
                overall_marker[algo] = _marker(result, True, alpha)
            else:
                overall_marker[algo] = MARK_NONE

        header = ["problem"]
        for algo in algos:
            header += [algo, f"{algo}_mark"]
        rows = []
        for problem in dim_problems:
            row = [problem]
            for algo in algos:
                if algo in averages[problem]:
                    row += [averages[problem][algo], markers[problem][algo]]
                else:
                    row += ["", ""]
            rows.append(row)
        overall_row = ["Overall"]
        for algo in algos:
            if algo in overall:
                overall_row += [overall[algo], overall_marker[algo]]
            else:
                overall_row += ["", ""]
        rows.append(overall_row)
        path = out_dir / f"logscore_D{dim}.csv"
        _write_csv(path, header, rows)
        paths[f"logscore_D{dim}"] = path
        summary["logscore_tables"][str(dim)] = {
            "per_function": {
                p: {a: averages[p][a] for a in averages[p]}
                for p in dim_problems
            },
            "overall": overall,
            "overall_marker": overall_marker,
        }

    # Success rates and expected runtimes.
    grouped: dict[tuple[str, int, str], list[RunRecord]] = {}
    for record in error_records:
        grouped.setdefault((record.problem, record.dim, record.algo), []).append(
            record
        )
    rows = []
    for problem in problems:
        for dim in dims:
            for algo in algos:
                cell = grouped.get((problem, dim, algo))
                if not cell:
                    continue
                for target in targets:
                    times = [hitting_time(r, target) for r in cell]
                    sr, ar, ert = sr_ar_ert(times, cap)
                    rows.append(
                        [problem, dim, algo, target, len(cell), sr, ar, ert]
                    )
    sr_path = out_dir / "sr_ert.csv"
    _write_csv(
        sr_path,
        ["problem", "dim", "algo", "target", "n_runs", "sr", "ar", "ert"],
        rows,
    )
    paths["sr_ert"] = sr_path

    # ECDF curves per dimension.
    grid = eval_grid(cap)
    for dim in dims:
        columns: dict[str, list[float]] = {}
        for algo in algos:
            pool = [
                r for r in error_records if r.dim == dim and r.algo == algo
            ]
            if pool:
                columns[algo] = ecdf_curve(pool, targets, grid)
        if not columns:
            continue
        present = [a for a in algos if a in columns]
        rows = [
            [grid[i]] + [columns[a][i] for a in present]
            for i in range(len(grid))
        ]
        path = out_dir / f"ecdf_D{dim}.csv"
        _write_csv(path, ["evals"] + present, rows)
        paths[f"ecdf_D{dim}"] = path

    # Friedman / Conover over (problem, dim) blocks of average logscores.
    fn_avg: dict[tuple[str, int], dict[str, float]] = {}
    for (problem, dim, algo), scores in by_cell.items():
        fn_avg.setdefault((problem, dim), {})[algo] = sum(scores) / len(scores)
    blocks = []
    block_keys = []
    for dim in dims:
        for problem in problems:
            cell = fn_avg.get((problem, dim))
            if cell and all(a in cell for a in algos):
                blocks.append([cell[a] for a in algos])
                block_keys.append(f"{problem}/D{dim}")
    dropped = sum(1 for key in fn_avg if fn_avg[key] and not all(
        a in fn_avg[key] for a in algos
    ))
    if dropped:
        warnings.warn(
            f"dropping {dropped} incomplete blocks from the rank analysis",
            RuntimeWarning,
        )
    if len(blocks) >= 2 and len(algos) >= 2:
        result = friedman_conover(blocks, adjust=True)
        ordered = [
            algos[i]
            for i in sorted(
                range(len(algos)), key=lambda i: result.average_ranks[i]
            )
        ]
        posthoc = {
            algos[i]: {algos[j]: result.posthoc_p[i][j] for j in range(len(algos))}
            for i in range(len(algos))
        }
        cliques = (
            [list(algos)]
            if result.degenerate
            else rank_cliques(ordered, posthoc, alpha)
        )
        friedman_block = {
            "statistic": result.statistic,
            "p_value": result.p_value,
            "df": result.df,
            "n_blocks": len(blocks),
            "blocks": block_keys,
            "average_ranks": {
                algos[i]: result.average_ranks[i] for i in range(len(algos))
            },
            "posthoc_p": posthoc,
            "cliques": cliques,
            "degenerate": result.degenerate,
        }
        fr_path = out_dir / "friedman.json"
        with open(fr_path, "w") as handle:
            json.dump(friedman_block, handle, indent=2, sort_keys=True)
            handle.write("\n")
        paths["friedman"] = fr_path
        rows = [
            [algos[i]] + [result.posthoc_p[i][j] for j in range(len(algos))]
            for i in range(len(algos))
        ]
        cp_path = out_dir / "conover_p.csv"
        _write_csv(cp_path, ["algo"] + list(algos), rows)
        paths["conover_p"] = cp_path
        summary["friedman"] = friedman_block

    # Boxplot statistics per (dim, group, algo, budget).
    rows = []
    for budget in budgets:
        best = pooled_best_errors(error_records, budget)
        pooled: dict[tuple[int, str, str], list[float]] = {}
        for record in error_records:
            value = error_at_budget(record, budget)
            base = best[(record.problem, record.dim, record.instance)]
            score = logscore(value, base)
            key = (record.dim, _group_label(record.problem), record.algo)
            pooled.setdefault(key, []).append(score)
        for (dim, group, algo) in sorted(pooled):
            values = np.asarray(pooled[(dim, group, algo)], dtype=float)
            q1, med, q3 = np.percentile(values, [25.0, 50.0, 75.0])
            iqr = q3 - q1
            in_lo = values[values >= q1 - 1.5 * iqr]
            in_hi = values[values <= q3 + 1.5 * iqr]
            lo = float(in_lo.min()) if in_lo.size else float(q1)
            hi = float(in_hi.max()) if in_hi.size else float(q3)
            rows.append(
                [
                    dim,
                    group,
                    algo,
                    budget,
                    values.shape[0],
                    float(med),
                    float(q1),
                    float(q3),
                    lo,
                    hi,
                ]
            )
    box_path = out_dir / "boxplots.csv"
    _write_csv(
        box_path,
        [
            "dim",
            "group",
            "algo",
            "budget",
            "n",
            "median",
            "q1",
            "q3",
            "whisker_lo",
            "whisker_hi",
        ],
        rows,
    )
    paths["boxplots"] = box_path


def _value_mode_reports(
    value_records: list[RunRecord],
    out_dir: Path,
    paths: dict[str, Path],
    summary: dict,
) -> None:
    algos = _algo_order(value_records)
    problems = sorted({r.problem for r in value_records})

    curve_rows = []
    summary_rows = []
    cluster_summary: dict[str, dict[str, dict[str, float]]] = {}
    for problem in problems:
        problem_records = [r for r in value_records if r.problem == problem]
        span = max(r.evals_used for r in problem_records)
        grid = eval_grid(max(1, span))
        for algo in algos:
            cell = [r for r in problem_records if r.algo == algo]
            if not cell:
                continue
            finals = [r.final_value for r in cell]
            n = len(finals)
            mean_final = sum(finals) / n
            sd_final = (
                math.sqrt(sum((v - mean_final) ** 2 for v in finals) / (n - 1))
                if n > 1
                else 0.0
            )
            best_final = min(finals)
            summary_rows.append(
                [problem, algo, n, mean_final, sd_final, best_final]
            )
            cluster_summary.setdefault(problem, {})[algo] = {
                "n_runs": n,
                "mean_final": mean_final,
                "sd_final": sd_final,
                "best_final": best_final,
            }
            for evals in grid:
                at = [error_at_budget(r, evals) for r in cell]
                mean_v = sum(at) / n
                sd_v = (
                    math.sqrt(sum((v - mean_v) ** 2 for v in at) / (n - 1))
                    if n > 1
                    else 0.0
                )
                half = 1.96 * sd_v / math.sqrt(n)
                curve_rows.append([problem, algo, evals, n, mean_v, half])

    curves_path = out_dir / "convergence_curves.csv"
    _write_csv(
        curves_path,
        ["problem", "algo", "evals", "n", "mean", "halfwidth95"],
        curve_rows,
    )
    paths["convergence_curves"] = curves_path

    cs_path = out_dir / "cluster_summary.csv"
    _write_csv(
        cs_path,
        ["problem", "algo", "n_runs", "mean_final", "sd_final", "best_final"],
        summary_rows,
    )
    paths["cluster_summary"] = cs_path
    summary["clusters"] = cluster_summary
