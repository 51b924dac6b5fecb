"""Report generation tests on fully synthetic, hand-checkable records."""
from __future__ import annotations

import csv
import json
import math

import numpy as np
import pytest

from hopbench.analysis.metrics import error_at_budget, logscore
from hopbench.analysis.reports import (
    DEFAULT_BUDGETS,
    DEFAULT_TARGETS,
    GRID_POINTS,
    MARK_NONE,
    MARK_REFERENCE,
    MARK_WORSE,
    ReportBundle,
    eval_grid,
    make_reports,
    rank_cliques,
)
from hopbench.harness import RunRecord
from hopbench.problems.suite import group_of

BUDGETS = (10, 100)
TARGETS = (1e-8, 0.5)
ALPHA_BASE = {"f1": 1e-10, "f2": 2e-10, "f10": 3e-10}
BETA_BASE = {"f1": 1.0, "f2": 2.0, "f10": 4.0}
N_RUNS = 6


def error_record(algo, problem, run, events, final_error, status="ok"):
    return RunRecord(
        algo=algo,
        problem=problem,
        dim=2,
        instance=0,
        run=run,
        seed=1000 + run,
        events=list(events),
        final_value=123.0,
        final_error=final_error,
        evals_used=100,
        wall_time_s=0.01,
        status=status,
    )


def error_corpus():
    """Two algorithms on three functions; alpha strictly dominates beta."""
    records = []
    for problem in ("f1", "f2", "f10"):
        for run in range(N_RUNS):
            final = ALPHA_BASE[problem] * (1 + run)
            records.append(
                error_record(
                    "alpha", problem, run, [(1, 10.0), (20, final)], final
                )
            )
            final = BETA_BASE[problem] * (1 + run)
            records.append(
                error_record(
                    "beta", problem, run, [(1, 50.0), (30, final)], final
                )
            )
    return records


def value_record(algo, run, final_value):
    return RunRecord(
        algo=algo,
        problem="LJ_5",
        dim=15,
        instance=0,
        run=run,
        seed=run,
        events=[(1, -1.0), (10, final_value)],
        final_value=final_value,
        final_error=None,
        evals_used=50,
        wall_time_s=0.02,
        status="ok",
    )


def value_corpus():
    records = []
    for run, final in enumerate([-5.0, -4.5, -4.0]):
        records.append(value_record("alpha", run, final))
    for run, final in enumerate([-3.0, -2.5, -2.0]):
        records.append(value_record("beta", run, final))
    return records


def read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


@pytest.fixture(scope="module")
def bundle(tmp_path_factory):
    out = tmp_path_factory.mktemp("reports")
    return make_reports(
        error_corpus() + value_corpus(),
        out,
        reference="alpha",
        alpha=0.05,
        budgets=BUDGETS,
        targets=TARGETS,
    )


class TestEvalGrid:
    def test_five_point_worked_example(self):
        assert eval_grid(100, points=5) == [1, 3, 10, 32, 100]

    def test_spans_one_to_cap_strictly_increasing(self):
        grid = eval_grid(200_000)
        assert grid[0] == 1
        assert grid[-1] == 200_000
        assert len(grid) <= GRID_POINTS
        assert all(b > a for a, b in zip(grid, grid[1:]))
        assert all(isinstance(v, int) for v in grid)

    def test_tiny_caps(self):
        assert eval_grid(1) == [1]
        assert eval_grid(2) == [1, 2]

    def test_rejects_nonpositive_cap(self):
        with pytest.raises(ValueError):
            eval_grid(0)


class TestRankCliques:
    def test_all_indistinguishable_is_one_clique(self):
        posthoc = {
            a: {b: 1.0 for b in "abc"} for a in "abc"
        }
        assert rank_cliques(["a", "b", "c"], posthoc, 0.05) == [
            ["a", "b", "c"]
        ]

    def test_all_distinct_are_singletons(self):
        posthoc = {
            a: {b: (1.0 if a == b else 0.001) for b in "abc"} for a in "abc"
        }
        assert rank_cliques(["a", "b", "c"], posthoc, 0.05) == [
            ["a"],
            ["b"],
            ["c"],
        ]

    def test_overlapping_chain(self):
        p = {
            "a": {"a": 1.0, "b": 0.5, "c": 0.01},
            "b": {"a": 0.5, "b": 1.0, "c": 0.5},
            "c": {"a": 0.01, "b": 0.5, "c": 1.0},
        }
        assert rank_cliques(["a", "b", "c"], p, 0.05) == [
            ["a", "b"],
            ["b", "c"],
        ]


class TestBundleShape:
    def test_every_listed_path_exists(self, bundle):
        assert isinstance(bundle, ReportBundle)
        expected = {
            "score_table",
            "logscore_D2",
            "sr_ert",
            "ecdf_D2",
            "friedman",
            "conover_p",
            "boxplots",
            "convergence_curves",
            "cluster_summary",
            "summary",
        }
        assert set(bundle.paths) == expected
        for path in bundle.paths.values():
            assert path.is_file()

    def test_summary_digest(self, bundle):
        with open(bundle.paths["summary"]) as handle:
            on_disk = json.load(handle)
        assert on_disk["reference"] == "alpha"
        assert on_disk["alpha"] == 0.05
        assert on_disk["budgets"] == [10, 100]
        assert on_disk["targets"] == [0.5, 1e-8]
        assert on_disk["n_records"] == 42
        assert on_disk["n_failed"] == 0
        assert on_disk["n_error_runs"] == 36
        assert on_disk["n_value_runs"] == 6
        assert bundle.summary["n_records"] == 42


class TestScoreTableCsv:
    def test_header_and_row_count(self, bundle):
        rows = read_csv(bundle.paths["score_table"])
        assert len(rows) == 36
        assert list(rows[0]) == [
            "algo",
            "problem",
            "dim",
            "instance",
            "run",
            "error_at_10",
            "error_at_100",
            "evals_to_0.5",
            "evals_to_1e-08",
            "logscore",
        ]

    def test_row_values_match_the_construction(self, bundle):
        rows = read_csv(bundle.paths["score_table"])
        for row in rows:
            problem, run = row["problem"], int(row["run"])
            if row["algo"] == "alpha":
                final = ALPHA_BASE[problem] * (1 + run)
                assert float(row["error_at_10"]) == 10.0
                assert float(row["evals_to_0.5"]) == 20.0
                assert float(row["evals_to_1e-08"]) == 20.0
                expected_score = math.log(final / ALPHA_BASE[problem])
            else:
                final = BETA_BASE[problem] * (1 + run)
                assert float(row["error_at_10"]) == 50.0
                assert float(row["evals_to_0.5"]) == math.inf
                assert float(row["evals_to_1e-08"]) == math.inf
                expected_score = math.log(final / ALPHA_BASE[problem])
            assert float(row["error_at_100"]) == final
            assert float(row["logscore"]) == pytest.approx(
                expected_score, rel=1e-12
            )


class TestLogscoreTable:
    def test_numeric_problem_ordering_and_markers(self, bundle):
        rows = read_csv(bundle.paths["logscore_D2"])
        assert [r["problem"] for r in rows] == ["f1", "f2", "f10", "Overall"]
        for row in rows:
            assert row["alpha_mark"] == MARK_REFERENCE
        for row in rows[:3]:
            assert row["beta_mark"] == MARK_WORSE
        # Three paired per-function averages cannot reach p < 0.05.
        assert rows[3]["beta_mark"] == MARK_NONE

    def test_average_columns(self, bundle):
        rows = read_csv(bundle.paths["logscore_D2"])
        alpha_avg = float(np.mean([math.log(1 + r) for r in range(N_RUNS)]))
        for row in rows[:3]:
            assert float(row["alpha"]) == pytest.approx(alpha_avg, rel=1e-12)
            beta_avg = float(
                np.mean(
                    [
                        math.log(
                            BETA_BASE[row["problem"]]
                            * (1 + r)
                            / ALPHA_BASE[row["problem"]]
                        )
                        for r in range(N_RUNS)
                    ]
                )
            )
            assert float(row["beta"]) == pytest.approx(beta_avg, rel=1e-12)
        per_problem = [float(r["alpha"]) for r in rows[:3]]
        assert float(rows[3]["alpha"]) == pytest.approx(
            float(np.mean(per_problem)), rel=1e-12
        )


class TestSrErt:
    def test_rows_match_hand_computation(self, bundle):
        rows = read_csv(bundle.paths["sr_ert"])
        assert len(rows) == 12  # 3 problems x 2 algos x 2 targets
        assert [r["problem"] for r in rows[:4]] == ["f1"] * 4
        for row in rows:
            assert int(row["n_runs"]) == N_RUNS
            if row["algo"] == "alpha":
                assert float(row["sr"]) == 1.0
                assert float(row["ar"]) == 20.0
                assert float(row["ert"]) == 20.0
            else:
                assert float(row["sr"]) == 0.0
                assert float(row["ar"]) == 100.0
                assert float(row["ert"]) == math.inf
            assert float(row["ert"]) >= float(row["ar"])


class TestEcdf:
    def test_curves_match_hitting_fractions(self, bundle):
        rows = read_csv(bundle.paths["ecdf_D2"])
        grid = [int(r["evals"]) for r in rows]
        assert grid == eval_grid(100)
        alpha_col = [float(r["alpha"]) for r in rows]
        beta_col = [float(r["beta"]) for r in rows]
        expected_alpha = [1.0 if g >= 20 else 0.0 for g in grid]
        assert alpha_col == expected_alpha
        assert beta_col == [0.0] * len(grid)
        for col in (alpha_col, beta_col):
            assert all(0.0 <= v <= 1.0 for v in col)
            assert all(b >= a for a, b in zip(col, col[1:]))


class TestFriedmanOutputs:
    def test_rank_block(self, bundle):
        with open(bundle.paths["friedman"]) as handle:
            block = json.load(handle)
        assert block["average_ranks"] == {"alpha": 1.0, "beta": 2.0}
        assert block["n_blocks"] == 3
        assert sorted(block["blocks"]) == ["f1/D2", "f10/D2", "f2/D2"]
        assert block["df"] == 1
        assert block["statistic"] == pytest.approx(3.0, abs=1e-12)
        assert not block["degenerate"]
        # A perfectly consistent winner separates in the post-hoc test.
        assert block["cliques"] == [["alpha"], ["beta"]]
        assert bundle.summary["friedman"]["average_ranks"]["alpha"] == 1.0

    def test_conover_matrix_layout(self, bundle):
        rows = read_csv(bundle.paths["conover_p"])
        assert [r["algo"] for r in rows] == ["alpha", "beta"]
        for row in rows:
            assert float(row[row["algo"]]) == 1.0
        assert float(rows[0]["beta"]) == float(rows[1]["alpha"])


class TestBoxplots:
    def test_stats_match_numpy_percentiles(self, bundle):
        records = [r for r in error_corpus()]
        pooled = {}
        for budget in BUDGETS:
            best = {}
            for record in records:
                key = (record.problem, record.dim, record.instance)
                value = error_at_budget(record, budget)
                best[key] = min(best.get(key, math.inf), value)
            for record in records:
                value = error_at_budget(record, budget)
                score = logscore(
                    value, best[(record.problem, record.dim, record.instance)]
                )
                cell = (
                    record.dim,
                    group_of(int(record.problem[1:])),
                    record.algo,
                    budget,
                )
                pooled.setdefault(cell, []).append(score)

        rows = read_csv(bundle.paths["boxplots"])
        seen = set()
        for row in rows:
            cell = (
                int(row["dim"]),
                row["group"],
                row["algo"],
                int(row["budget"]),
            )
            seen.add(cell)
            values = np.asarray(pooled[cell])
            assert int(row["n"]) == values.size
            q1, med, q3 = np.percentile(values, [25.0, 50.0, 75.0])
            assert float(row["median"]) == pytest.approx(med, abs=1e-12)
            assert float(row["q1"]) == pytest.approx(q1, abs=1e-12)
            assert float(row["q3"]) == pytest.approx(q3, abs=1e-12)
            iqr = q3 - q1
            lo = values[values >= q1 - 1.5 * iqr].min()
            hi = values[values <= q3 + 1.5 * iqr].max()
            assert float(row["whisker_lo"]) == pytest.approx(lo, abs=1e-12)
            assert float(row["whisker_hi"]) == pytest.approx(hi, abs=1e-12)
        assert seen == set(pooled)


class TestValueModeOutputs:
    def test_cluster_summary_statistics(self, bundle):
        rows = read_csv(bundle.paths["cluster_summary"])
        assert len(rows) == 2
        finals = {"alpha": [-5.0, -4.5, -4.0], "beta": [-3.0, -2.5, -2.0]}
        for row in rows:
            values = np.asarray(finals[row["algo"]])
            assert row["problem"] == "LJ_5"
            assert int(row["n_runs"]) == 3
            assert float(row["mean_final"]) == pytest.approx(values.mean())
            assert float(row["sd_final"]) == pytest.approx(
                values.std(ddof=1)
            )
            assert float(row["best_final"]) == values.min()
        assert bundle.summary["clusters"]["LJ_5"]["alpha"]["best_final"] == -5.0

    def test_convergence_curves_end_at_the_final_means(self, bundle):
        rows = read_csv(bundle.paths["convergence_curves"])
        grid = eval_grid(50)
        for algo, mean_final in (("alpha", -4.5), ("beta", -2.5)):
            col = [r for r in rows if r["algo"] == algo]
            assert [int(r["evals"]) for r in col] == grid
            last = col[-1]
            assert float(last["mean"]) == pytest.approx(mean_final)
            sd = float(np.std([0.5, 0.0, -0.5], ddof=1))
            assert float(last["halfwidth95"]) == pytest.approx(
                1.96 * sd / math.sqrt(3)
            )


class TestBehaviour:
    def test_deterministic_byte_identical_outputs(self, tmp_path):
        records = error_corpus() + value_corpus()
        first = make_reports(
            records, tmp_path / "one", reference="alpha",
            budgets=BUDGETS, targets=TARGETS,
        )
        second = make_reports(
            records, tmp_path / "two", reference="alpha",
            budgets=BUDGETS, targets=TARGETS,
        )
        assert set(first.paths) == set(second.paths)
        for name, path in first.paths.items():
            assert path.read_bytes() == second.paths[name].read_bytes()

    def test_failed_records_are_excluded_with_a_warning(self, tmp_path):
        records = error_corpus()
        records.append(
            error_record("alpha", "f1", 99, [], None, status="failed")
        )
        records.append(
            error_record("beta", "f1", 98, [], None, status="failed")
        )
        with pytest.warns(RuntimeWarning, match="excluding 2 failed runs"):
            bundle = make_reports(
                records, tmp_path, reference="alpha",
                budgets=BUDGETS, targets=TARGETS,
            )
        assert bundle.summary["n_failed"] == 2
        assert bundle.summary["n_error_runs"] == 36

    def test_unknown_reference_yields_no_markers(self, tmp_path):
        bundle = make_reports(
            error_corpus(), tmp_path, reference="ghost",
            budgets=BUDGETS, targets=TARGETS,
        )
        rows = read_csv(bundle.paths["logscore_D2"])
        for row in rows:
            assert row["alpha_mark"] == MARK_NONE
            assert row["beta_mark"] == MARK_NONE

    def test_empty_record_list_writes_only_the_summary(self, tmp_path):
        bundle = make_reports(
            [], tmp_path, budgets=BUDGETS, targets=TARGETS
        )
        assert set(bundle.paths) == {"summary"}
        assert bundle.summary["n_records"] == 0

    def test_validation(self, tmp_path):
        with pytest.raises(ValueError, match="alpha"):
            make_reports([], tmp_path, alpha=1.5)
        with pytest.raises(ValueError):
            make_reports([], tmp_path, budgets=())
        with pytest.raises(ValueError):
            make_reports([], tmp_path, targets=())

    def test_default_grids_are_the_documented_ones(self):
        assert DEFAULT_BUDGETS == (1000, 10000, 50000, 100000, 200000)
        assert DEFAULT_TARGETS == (1e-8, 1e-4, 1e-2, 1e-1, 1.0)
