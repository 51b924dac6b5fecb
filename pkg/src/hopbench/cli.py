"""Command-line front end.

Subcommands::

    hopbench run            benchmark-suite experiment matrix
    hopbench clusters       Lennard-Jones / Morse cluster experiments
    hopbench analyze        build analysis reports from run records
    hopbench list-problems  show the problem catalog
    hopbench timing         wall-time overhead vs. pure random search

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .analysis.reports import DEFAULT_BUDGETS, DEFAULT_TARGETS, make_reports
from .core import mix_seed
from .harness import (
    DEFAULT_DIMENSIONS,
    ExperimentConfig,
    read_manifest,
    read_records,
    run_clusters,
    run_experiment,
)
from .optimizers import ALGORITHMS, DEFAULT_ALGORITHMS, make_optimizer
from .problems import problem_catalog
from .problems.clusters import CLUSTER_KINDS
from .problems.suite import FUNCTION_IDS, make_instance

USAGE_ERROR = 1
RUNTIME_ERROR = 2

TIMING_ALGOS = ("bhpop", "cmaes")
TIMING_DIMS = (20, 40, 60, 80, 100)
TIMING_BASELINE = "random"


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures exit with status 1."""

    def error(self, message: str):  # noqa: A003 - argparse API
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def parse_int_list(text: str) -> list[int]:
    """Parse ``1-5,8,10`` style comma/range lists of integers."""
    out: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError("empty entry in integer list")
        if "-" in chunk[1:]:
            split_at = chunk.index("-", 1)
            lo = int(chunk[:split_at])
            hi = int(chunk[split_at + 1 :])
            if hi < lo:
                raise ValueError(f"descending range {chunk!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(chunk))
    if not out:
        raise ValueError("empty integer list")
    return out


def parse_float_list(text: str) -> list[float]:
    values = [float(chunk) for chunk in text.split(",") if chunk.strip()]
    if not values:
        raise ValueError("empty number list")
    return values


def parse_name_list(text: str) -> list[str]:
    names = [chunk.strip() for chunk in text.split(",") if chunk.strip()]
    if not names:
        raise ValueError("empty name list")
    return names


def build_parser() -> _Parser:
    parser = _Parser(
        prog="hopbench",
        description="Global-optimization benchmark harness and analysis.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    run_p = sub.add_parser(
        "run", help="run the benchmark-suite experiment matrix"
    )
    run_p.add_argument(
        "--algos",
        default=",".join(DEFAULT_ALGORITHMS),
        help=f"comma list from {sorted(ALGORITHMS)}",
    )
    run_p.add_argument(
        "--functions", default="1-24", help="function ids, e.g. 1-5,8"
    )
    run_p.add_argument(
        "--dims",
        default=",".join(str(d) for d in DEFAULT_DIMENSIONS),
        help="dimensions, e.g. 5,10,20,40",
    )
    run_p.add_argument("--instances", type=int, default=15)
    run_p.add_argument("--runs", type=int, default=15)
    run_p.add_argument(
        "--cap", type=int, default=200000, help="evaluation budget per run"
    )
    run_p.add_argument(
        "--err", type=float, default=1e-8, help="target error (stop threshold)"
    )
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--out", default="results", help="output directory")
    run_p.add_argument(
        "--workers", type=int, default=None, help="parallel worker count"
    )
    run_p.add_argument(
        "--no-time",
        action="store_true",
        help="record wall_time_s as 0.0 for byte-identical outputs",
    )

    cl_p = sub.add_parser("clusters", help="run atomic-cluster experiments")
    cl_p.add_argument(
        "--kinds", default=",".join(CLUSTER_KINDS), help="comma list of lj,mo"
    )
    cl_p.add_argument("--atoms", default="20", help="cluster sizes, e.g. 20,30,40")
    cl_p.add_argument("--algos", default="bh,bhpop")
    cl_p.add_argument("--runs", type=int, default=15)
    cl_p.add_argument("--seed", type=int, default=0)
    cl_p.add_argument("--out", default="cluster-results")
    cl_p.add_argument("--workers", type=int, default=None)
    cl_p.add_argument("--no-time", action="store_true")

    an_p = sub.add_parser("analyze", help="build reports from run records")
    an_p.add_argument(
        "--in", dest="in_path", required=True, help="records file or directory"
    )
    an_p.add_argument("--out", default=None, help="report directory")
    an_p.add_argument(
        "--budgets", default=",".join(str(b) for b in DEFAULT_BUDGETS)
    )
    an_p.add_argument(
        "--targets", default=",".join(f"{t:g}" for t in DEFAULT_TARGETS)
    )
    an_p.add_argument("--reference", default="bhpop")
    an_p.add_argument("--alpha", type=float, default=0.05)

    sub.add_parser("list-problems", help="print the problem catalog")

    tm_p = sub.add_parser(
        "timing", help="wall-time overhead vs. pure random search"
    )
    tm_p.add_argument("--algos", default=",".join(TIMING_ALGOS))
    tm_p.add_argument("--function", type=int, default=24)
    tm_p.add_argument(
        "--dims", default=",".join(str(d) for d in TIMING_DIMS)
    )
    tm_p.add_argument("--evals", type=int, default=10000)
    tm_p.add_argument("--reps", type=int, default=10)
    tm_p.add_argument("--seed", type=int, default=0)
    tm_p.add_argument("--out", default=None, help="optional CSV output path")
    return parser


def _cmd_run(args) -> int:
    config = ExperimentConfig(
        algorithms=tuple(parse_name_list(args.algos)),
        functions=tuple(parse_int_list(args.functions)),
        dimensions=tuple(parse_int_list(args.dims)),
        n_instances=args.instances,
        n_runs=args.runs,
        max_evals=args.cap,
        target_error=args.err,
        master_seed=args.seed,
        measure_time=not args.no_time,
    )
    records = run_experiment(config, args.out, n_workers=args.workers)
    n_failed = sum(1 for r in records if r.status != "ok")
    print(
        f"wrote {len(records)} records ({n_failed} failed) to {args.out}",
    )
    return 0


def _cmd_clusters(args) -> int:
    records = run_clusters(
        out_dir=args.out,
        algorithms=tuple(parse_name_list(args.algos)),
        kinds=tuple(parse_name_list(args.kinds)),
        sizes=tuple(parse_int_list(args.atoms)),
        n_runs=args.runs,
        master_seed=args.seed,
        measure_time=not args.no_time,
        n_workers=args.workers,
    )
    bundle = make_reports(records, Path(args.out) / "reports")
    print(f"wrote {len(records)} records to {args.out}")
    clusters = bundle.summary.get("clusters", {})
    if clusters:
        print(f"{'problem':<10} {'algo':<8} {'mean':>12} {'std':>10} {'best':>12}")
        for problem in sorted(clusters):
            for algo in sorted(clusters[problem]):
                cell = clusters[problem][algo]
                print(
                    f"{problem:<10} {algo:<8} "
                    f"{cell['mean_final']:>12.4f} {cell['sd_final']:>10.4f} "
                    f"{cell['best_final']:>12.4f}"
                )
    return 0


def _cmd_analyze(args) -> int:
    in_path = Path(args.in_path)
    records = read_records(in_path)
    if not records:
        raise RuntimeError(f"no records found under {in_path}")
    base = in_path if in_path.is_dir() else in_path.parent
    try:
        read_manifest(base)
    except FileNotFoundError:
        print("note: no manifest found; analyzing records as-is")
    out_dir = Path(args.out) if args.out else base / "reports"
    bundle = make_reports(
        records,
        out_dir,
        reference=args.reference,
        alpha=args.alpha,
        budgets=parse_int_list(args.budgets),
        targets=parse_float_list(args.targets),
    )
    for name in sorted(bundle.paths):
        print(f"wrote {bundle.paths[name]}")
    return 0


def _cmd_list_problems(args) -> int:
    rows = problem_catalog()
    print(f"{'name':<12} {'kind':<10} {'group':<24} description")
    for row in rows:
        print(
            f"{row['name']:<12} {row['kind']:<10} {row['group']:<24} "
            f"{row['label']}"
        )
    return 0


def measure_timing(
    algos: Sequence[str],
    function_id: int = 24,
    dims: Sequence[int] = TIMING_DIMS,
    evals: int = 10000,
    reps: int = 10,
    seed: int = 0,
) -> list[dict]:
    """Mean wall time per algorithm and overhead ratio vs. random search.

    Each rep runs a fresh optimizer for exactly ``evals`` evaluations on a
    benchmark instance (target error 0, unreachable on multimodal
    functions, so the full budget is always spent). The baseline is pure
    random search at the same budget.
    """
    if function_id not in FUNCTION_IDS:
        raise ValueError(f"unknown function id {function_id}")
    if evals < 1 or reps < 1:
        raise ValueError("evals and reps must be >= 1")
    rows: list[dict] = []
    for dim in dims:
        problem = make_instance(function_id, dim, instance=0)

        def mean_seconds(name: str) -> float:
            total = 0.0
            for rep in range(reps):
                optimizer = make_optimizer(
                    name,
                    max_evals=evals,
                    target_error=0.0,
                    random_state=mix_seed(seed, dim, rep),
                )
                start = time.perf_counter()
                optimizer.fit(problem)
                total += time.perf_counter() - start
                if optimizer.n_evals_ != evals:
                    raise RuntimeError(
                        f"{name} spent {optimizer.n_evals_} != {evals} evals"
                    )
            return total / reps

        baseline = mean_seconds(TIMING_BASELINE)
        for name in algos:
            seconds = baseline if name == TIMING_BASELINE else mean_seconds(name)
            rows.append(
                {
                    "algo": name,
                    "dim": dim,
                    "evals": evals,
                    "reps": reps,
                    "mean_seconds": seconds,
                    "baseline_seconds": baseline,
                    "overhead_ratio": seconds / baseline,
                }
            )
    return rows


def _cmd_timing(args) -> int:
    rows = measure_timing(
        parse_name_list(args.algos),
        function_id=args.function,
        dims=parse_int_list(args.dims),
        evals=args.evals,
        reps=args.reps,
        seed=args.seed,
    )
    print(
        f"{'algo':<8} {'dim':>5} {'mean_s':>10} {'ratio_vs_random':>16}"
    )
    for row in rows:
        print(
            f"{row['algo']:<8} {row['dim']:>5} "
            f"{row['mean_seconds']:>10.4f} {row['overhead_ratio']:>16.2f}"
        )
    print(
        "note: seconds are hardware-dependent; compare the overhead ratios"
    )
    if args.out:
        with open(args.out, "w") as handle:
            json.dump(rows, handle, indent=2)
            handle.write("\n")
        print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "clusters": _cmd_clusters,
    "analyze": _cmd_analyze,
    "list-problems": _cmd_list_problems,
    "timing": _cmd_timing,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_info:
        return int(exit_info.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, RuntimeError, KeyError) as error:
        print(f"hopbench: error: {error}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
