"""Command-line interface tests: parsing, exit codes, end-to-end flows."""
from __future__ import annotations

import json
from pathlib import Path

import pytest

from hopbench import __version__
from hopbench.cli import (
    RUNTIME_ERROR,
    TIMING_ALGOS,
    TIMING_DIMS,
    USAGE_ERROR,
    build_parser,
    main,
    measure_timing,
    parse_float_list,
    parse_int_list,
    parse_name_list,
)


class TestListParsing:
    def test_ranges_and_plain_lists(self):
        assert parse_int_list("1-5") == [1, 2, 3, 4, 5]
        assert parse_int_list("5,10,20,40") == [5, 10, 20, 40]
        assert parse_int_list("1-3,8,10") == [1, 2, 3, 8, 10]
        assert parse_int_list("7") == [7]
        assert parse_int_list(" 2 , 4 ") == [2, 4]

    def test_negative_values_are_not_ranges(self):
        assert parse_int_list("-3") == [-3]
        assert parse_int_list("-3--1") == [-3, -2, -1]

    def test_rejects_malformed_input(self):
        with pytest.raises(ValueError):
            parse_int_list("5-1")
        with pytest.raises(ValueError):
            parse_int_list("")
        with pytest.raises(ValueError):
            parse_int_list("1,,2")
        with pytest.raises(ValueError):
            parse_int_list("abc")

    def test_float_and_name_lists(self):
        assert parse_float_list("1e-8,0.5,1") == [1e-8, 0.5, 1.0]
        assert parse_name_list("bh, de ,pso") == ["bh", "de", "pso"]
        with pytest.raises(ValueError):
            parse_float_list(",")
        with pytest.raises(ValueError):
            parse_name_list("  ")


class TestParserDefaults:
    def test_run_defaults(self):
        args = build_parser().parse_args(["run"])
        assert args.functions == "1-24"
        assert args.dims == "5,10,20,40"
        assert args.instances == 15
        assert args.runs == 15
        assert args.cap == 200000
        assert args.err == 1e-8
        assert args.seed == 0
        assert args.out == "results"
        assert args.workers is None
        assert not args.no_time

    def test_analyze_defaults(self):
        args = build_parser().parse_args(["analyze", "--in", "x"])
        assert parse_int_list(args.budgets) == [
            1000,
            10000,
            50000,
            100000,
            200000,
        ]
        assert parse_float_list(args.targets) == [1e-8, 1e-4, 0.01, 0.1, 1.0]
        assert args.reference == "bhpop"
        assert args.alpha == 0.05

    def test_timing_defaults(self):
        args = build_parser().parse_args(["timing"])
        assert TIMING_ALGOS == ("bhpop", "cmaes")
        assert TIMING_DIMS == (20, 40, 60, 80, 100)
        assert parse_name_list(args.algos) == ["bhpop", "cmaes"]
        assert args.function == 24
        assert parse_int_list(args.dims) == [20, 40, 60, 80, 100]
        assert args.evals == 10000
        assert args.reps == 10
        assert args.out is None


class TestExitCodes:
    def test_no_command_is_a_usage_error(self, capsys):
        assert main([]) == USAGE_ERROR
        assert "usage" in capsys.readouterr().err

    def test_unknown_command_is_a_usage_error(self, capsys):
        assert main(["frobnicate"]) == USAGE_ERROR
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag_is_a_usage_error(self, capsys):
        assert main(["run", "--bogus-flag", "3"]) == USAGE_ERROR
        err = capsys.readouterr().err
        assert "usage" in err
        assert "--bogus-flag" in err

    def test_version_exits_cleanly(self, capsys):
        assert main(["--version"]) == 0
        assert __version__ in capsys.readouterr().out

    def test_missing_input_is_a_runtime_error(self, tmp_path, capsys):
        code = main(["analyze", "--in", str(tmp_path / "nowhere")])
        assert code == RUNTIME_ERROR
        assert "hopbench: error:" in capsys.readouterr().err

    def test_bad_function_id_is_a_runtime_error(self, capsys):
        code = main(
            ["timing", "--function", "99", "--dims", "2", "--evals", "5",
             "--reps", "1"]
        )
        assert code == RUNTIME_ERROR
        assert "hopbench: error:" in capsys.readouterr().err


class TestRunAnalyzeRoundTrip:
    def run_args(self, out: Path) -> list[str]:
        return [
            "run",
            "--algos", "random,bh",
            "--functions", "1",
            "--dims", "2",
            "--instances", "1",
            "--runs", "2",
            "--cap", "200",
            "--seed", "3",
            "--out", str(out),
            "--no-time",
        ]

    def test_run_then_analyze(self, tmp_path, capsys):
        out = tmp_path / "results"
        assert main(self.run_args(out)) == 0
        stdout = capsys.readouterr().out
        assert "wrote 4 records (0 failed)" in stdout
        assert (out / "records.jsonl").is_file()
        assert (out / "manifest.json").is_file()

        code = main(
            [
                "analyze",
                "--in", str(out),
                "--budgets", "50,200",
                "--targets", "0.5,1e-8",
                "--reference", "bh",
            ]
        )
        assert code == 0
        stdout = capsys.readouterr().out
        reports = out / "reports"
        assert (reports / "summary.json").is_file()
        assert (reports / "score_table.csv").is_file()
        assert (reports / "sr_ert.csv").is_file()
        assert str(reports / "summary.json") in stdout
        summary = json.loads((reports / "summary.json").read_text())
        assert summary["n_records"] == 4
        assert summary["reference"] == "bh"

    def test_repeat_runs_are_byte_identical(self, tmp_path, capsys):
        first = tmp_path / "one"
        second = tmp_path / "two"
        assert main(self.run_args(first)) == 0
        assert main(self.run_args(second)) == 0
        capsys.readouterr()
        assert (first / "records.jsonl").read_bytes() == (
            second / "records.jsonl"
        ).read_bytes()

    def test_analyze_accepts_a_bare_records_file(self, tmp_path, capsys):
        out = tmp_path / "results"
        assert main(self.run_args(out)) == 0
        code = main(
            [
                "analyze",
                "--in", str(out / "records.jsonl"),
                "--out", str(tmp_path / "reports"),
                "--budgets", "200",
                "--targets", "0.5",
            ]
        )
        assert code == 0
        assert (tmp_path / "reports" / "summary.json").is_file()
        capsys.readouterr()

    def test_analyze_rejects_an_empty_directory(self, tmp_path, capsys):
        empty = tmp_path / "empty"
        empty.mkdir()
        assert main(["analyze", "--in", str(empty)]) == RUNTIME_ERROR
        capsys.readouterr()


class TestListProblems:
    def test_catalog_lines(self, capsys):
        assert main(["list-problems"]) == 0
        out = capsys.readouterr().out
        for name in ("f1", "f24", "LJ_<atoms>", "MO_<atoms>"):
            assert name in out
        assert "separable" in out


class TestClustersCommand:
    def test_tiny_cluster_run(self, tmp_path, capsys):
        out = tmp_path / "clusters"
        code = main(
            [
                "clusters",
                "--kinds", "lj",
                "--atoms", "2",
                "--algos", "random",
                "--runs", "2",
                "--seed", "1",
                "--out", str(out),
                "--no-time",
            ]
        )
        assert code == 0
        stdout = capsys.readouterr().out
        assert "wrote 2 records" in stdout
        assert "LJ_2" in stdout
        assert (out / "records.jsonl").is_file()
        assert (out / "reports" / "cluster_summary.csv").is_file()


class TestTiming:
    def test_measure_timing_rows(self):
        rows = measure_timing(
            ["random", "bhpop"], function_id=1, dims=[2], evals=60, reps=1,
            seed=0,
        )
        assert [row["algo"] for row in rows] == ["random", "bhpop"]
        for row in rows:
            assert row["dim"] == 2
            assert row["evals"] == 60
            assert row["reps"] == 1
            assert row["mean_seconds"] > 0.0
            assert row["overhead_ratio"] == pytest.approx(
                row["mean_seconds"] / row["baseline_seconds"]
            )
        assert rows[0]["overhead_ratio"] == 1.0  # the baseline itself

    def test_measure_timing_validation(self):
        with pytest.raises(ValueError):
            measure_timing(["random"], function_id=99)
        with pytest.raises(ValueError):
            measure_timing(["random"], function_id=1, evals=0)
        with pytest.raises(ValueError):
            measure_timing(["random"], function_id=1, reps=0)

    def test_timing_command_writes_json(self, tmp_path, capsys):
        out = tmp_path / "timing.json"
        code = main(
            [
                "timing",
                "--algos", "random",
                "--function", "1",
                "--dims", "2",
                "--evals", "40",
                "--reps", "1",
                "--out", str(out),
            ]
        )
        assert code == 0
        stdout = capsys.readouterr().out
        assert "ratio_vs_random" in stdout
        assert "overhead ratios" in stdout
        rows = json.loads(out.read_text())
        assert rows[0]["algo"] == "random"
        assert rows[0]["overhead_ratio"] == 1.0
