"""Experiment harness: run matrices of (algorithm, problem, instance, run)
cells, stream results to JSONL storage, and read them back.

Every cell gets an independent seed mixed from (master_seed, algorithm index,
problem id, dimension, instance, run), so records never depend on worker
count or completion order; files written with ``measure_time=False`` are
byte-identical across repeats.
"""
from __future__ import annotations

import json
import multiprocessing
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from . import problems
from .core import Problem, mix_seed
from .optimizers import ALGORITHMS, DEFAULT_ALGORITHMS, make_optimizer

RECORDS_NAME = "records.jsonl"
MANIFEST_NAME = "manifest.json"
WORKERS_ENV = "HOPBENCH_WORKERS"

AlgorithmSpec = Union[str, tuple[str, dict]]

# problem ids for seed mixing: suite functions use their id; clusters get a
# stable code well outside the suite range
_CLUSTER_KIND_CODE = {"lj": 0, "mo": 1}


def cluster_problem_id(kind: str, n_atoms: int) -> int:
    return 100_000 + 10 * n_atoms + _CLUSTER_KIND_CODE[kind]


DEFAULT_DIMENSIONS = (5, 10, 20, 40)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full-matrix experiment description."""

    algorithms: Sequence[AlgorithmSpec] = DEFAULT_ALGORITHMS
    functions: Sequence[int] = tuple(problems.FUNCTION_IDS)
    dimensions: Sequence[int] = DEFAULT_DIMENSIONS
    n_instances: int = 15
    n_runs: int = 15
    max_evals: int = 200_000
    target_error: float = 1e-8
    master_seed: int = 0
    measure_time: bool = True

    def normalized_algorithms(self) -> list[tuple[str, dict]]:
        out: list[tuple[str, dict]] = []
        for spec in self.algorithms:
            if isinstance(spec, str):
                out.append((spec, {}))
            else:
                name, params = spec
                out.append((name, dict(params)))
        seen = [name for name, _ in out]
        if len(set(seen)) != len(seen):
            raise ValueError("algorithm names must be unique in one experiment")
        for name, params in out:
            if name not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {name!r}")
            forbidden = {"max_evals", "target_error", "random_state"} & set(params)
            if forbidden:
                raise ValueError(
                    f"{name}: {sorted(forbidden)} are controlled by the harness"
                )
        return out


@dataclass
class RunRecord:
    """One run's result row; field order is the storage schema."""

    algo: str
    problem: str
    dim: int
    instance: int
    run: int
    seed: int
    events: list
    final_value: Optional[float]
    final_error: Optional[float]
    evals_used: int
    wall_time_s: float
    status: str

    def to_dict(self) -> dict:
        return {
            "algo": self.algo,
            "problem": self.problem,
            "dim": self.dim,
            "instance": self.instance,
            "run": self.run,
            "seed": self.seed,
            "events": [[int(i), float(v)] for i, v in self.events],
            "final_value": self.final_value,
            "final_error": self.final_error,
            "evals_used": self.evals_used,
            "wall_time_s": self.wall_time_s,
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, row: dict) -> "RunRecord":
        return cls(
            algo=row["algo"],
            problem=row["problem"],
            dim=int(row["dim"]),
            instance=int(row["instance"]),
            run=int(row["run"]),
            seed=int(row["seed"]),
            events=[(int(i), float(v)) for i, v in row["events"]],
            final_value=row["final_value"],
            final_error=row["final_error"],
            evals_used=int(row["evals_used"]),
            wall_time_s=float(row["wall_time_s"]),
            status=row["status"],
        )


def resolve_workers(n_workers: Optional[int] = None) -> int:
    """Explicit count, else the HOPBENCH_WORKERS variable, else all cores."""
    if n_workers is not None:
        if n_workers < 1:
            raise ValueError("n_workers must be >= 1")
        return int(n_workers)
    env = os.environ.get(WORKERS_ENV)
    if env:
        value = int(env)
        if value < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1, got {env!r}")
        return value
    return os.cpu_count() or 1


def run_single(
    problem: Problem,
    algorithm: str,
    seed: int,
    max_evals: int,
    target_error: float = 1e-8,
    params: Optional[dict] = None,
    measure_time: bool = True,
    instance: Optional[int] = None,
    run: int = 0,
) -> RunRecord:
    """Execute one cell and package the outcome as a record."""
    optimizer = make_optimizer(algorithm, **(params or {}))
    optimizer.set_params(
        max_evals=max_evals, target_error=target_error, random_state=seed
    )
    started = time.perf_counter()
    try:
        optimizer.fit(problem)
    except Exception:
        elapsed = time.perf_counter() - started
        return RunRecord(
            algo=algorithm,
            problem=problem.name,
            dim=problem.dimension,
            instance=problem.instance if instance is None else instance,
            run=run,
            seed=seed,
            events=[],
            final_value=None,
            final_error=None,
            evals_used=0,
            wall_time_s=elapsed if measure_time else 0.0,
            status="failed",
        )
    elapsed = time.perf_counter() - started
    result = optimizer.result_
    return RunRecord(
        algo=algorithm,
        problem=problem.name,
        dim=problem.dimension,
        instance=problem.instance if instance is None else instance,
        run=run,
        seed=seed,
        events=list(result.trajectory.events),
        final_value=result.best_value,
        final_error=result.best_error,
        evals_used=result.n_evals,
        wall_time_s=elapsed if measure_time else 0.0,
        status="ok",
    )


def _build_problem(task: dict) -> Problem:
    kind = task["problem_kind"]
    if kind == "suite":
        return problems.make_instance(
            task["function_id"], task["dim"], task["instance"]
        )
    if kind == "cluster":
        return problems.make_cluster_problem(
            task["cluster_kind"], task["n_atoms"], task.get("coord_bound")
        )
    if kind == "plugin":
        return problems.get_problem(task["problem_name"])
    raise ValueError(f"unknown problem kind {kind!r}")


def _run_cell(task: dict) -> dict:
    problem = _build_problem(task)
    record = run_single(
        problem,
        task["algorithm"],
        task["seed"],
        task["max_evals"],
        task["target_error"],
        task.get("params"),
        task["measure_time"],
        instance=task["instance"],
        run=task["run"],
    )
    return record.to_dict()


def _execute(
    tasks: list[dict],
    out_dir: Optional[Path],
    n_workers: int,
    manifest: dict,
) -> list[RunRecord]:
    writer = None
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / MANIFEST_NAME, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
        writer = open(out_dir / RECORDS_NAME, "w", encoding="utf-8")

    records: list[RunRecord] = []
    try:
        if n_workers == 1 or len(tasks) <= 1:
            rows: Iterable[dict] = map(_run_cell, tasks)
            records = _consume(rows, writer)
        else:
            try:
                context = multiprocessing.get_context("fork")
            except ValueError:  # platforms without fork
                context = multiprocessing.get_context()
            chunk = max(1, len(tasks) // (8 * n_workers))
            with ProcessPoolExecutor(
                max_workers=n_workers, mp_context=context
            ) as pool:
                rows = pool.map(_run_cell, tasks, chunksize=chunk)
                records = _consume(rows, writer)
    finally:
        if writer is not None:
            writer.close()
    failed = sum(1 for r in records if r.status != "ok")
    if failed:
        warnings.warn(f"{failed} of {len(records)} runs failed", RuntimeWarning)
    return records


def _consume(rows: Iterable[dict], writer) -> list[RunRecord]:
    records = []
    for row in rows:
        if writer is not None:
            writer.write(json.dumps(row, separators=(",", ":")) + "\n")
        records.append(RunRecord.from_dict(row))
    return records


def run_experiment(
    config: ExperimentConfig,
    out_dir: Optional[Union[str, Path]] = None,
    n_workers: Optional[int] = None,
) -> list[RunRecord]:
    """Run the full (algorithm x function x dimension x instance x run)
    matrix of ``config``, optionally streaming records to ``out_dir``."""
    algorithms = config.normalized_algorithms()
    for fid in config.functions:
        if fid not in problems.FUNCTION_IDS:
            raise ValueError(f"function ids must be in 1..24, got {fid}")
    for dim in config.dimensions:
        if dim < 2:
            raise ValueError("dimensions must be >= 2")

    tasks = []
    for algo_index, (name, params) in enumerate(algorithms):
        for fid in config.functions:
            for dim in config.dimensions:
                for instance in range(config.n_instances):
                    for run in range(config.n_runs):
                        tasks.append(
                            {
                                "problem_kind": "suite",
                                "function_id": fid,
                                "dim": dim,
                                "instance": instance,
                                "run": run,
                                "algorithm": name,
                                "params": params,
                                "seed": mix_seed(
                                    config.master_seed,
                                    algo_index,
                                    fid,
                                    dim,
                                    instance,
                                    run,
                                ),
                                "max_evals": config.max_evals,
                                "target_error": config.target_error,
                                "measure_time": config.measure_time,
                            }
                        )
    manifest = {
        "kind": "hopbench-experiment",
        "records": RECORDS_NAME,
        "config": {
            "algorithms": [
                {"name": name, "params": params} for name, params in algorithms
            ],
            "functions": list(config.functions),
            "dimensions": list(config.dimensions),
            "n_instances": config.n_instances,
            "n_runs": config.n_runs,
            "max_evals": config.max_evals,
            "target_error": config.target_error,
            "master_seed": config.master_seed,
            "measure_time": config.measure_time,
        },
        "n_cells": len(tasks),
    }
    return _execute(tasks, out_dir, resolve_workers(n_workers), manifest)


def run_clusters(
    algorithms: Sequence[AlgorithmSpec] = ("bh", "bhpop"),
    kinds: Sequence[str] = ("lj", "mo"),
    sizes: Sequence[int] = (20,),
    n_runs: int = 15,
    master_seed: int = 0,
    coord_bound: Optional[float] = None,
    out_dir: Optional[Union[str, Path]] = None,
    n_workers: Optional[int] = None,
    measure_time: bool = True,
) -> list[RunRecord]:
    """Run cluster problems to full budget (cap = 20000 * dimension)."""
    specs = ExperimentConfig(algorithms=algorithms).normalized_algorithms()
    for kind in kinds:
        if kind not in problems.CLUSTER_KINDS:
            raise ValueError(f"cluster kinds must be in {problems.CLUSTER_KINDS}")
    tasks = []
    for algo_index, (name, params) in enumerate(specs):
        for kind in kinds:
            for n_atoms in sizes:
                dim = 3 * int(n_atoms)
                for run in range(n_runs):
                    tasks.append(
                        {
                            "problem_kind": "cluster",
                            "cluster_kind": kind,
                            "n_atoms": int(n_atoms),
                            "coord_bound": coord_bound,
                            "dim": dim,
                            "instance": 0,
                            "run": run,
                            "algorithm": name,
                            "params": params,
                            "seed": mix_seed(
                                master_seed,
                                algo_index,
                                cluster_problem_id(kind, int(n_atoms)),
                                dim,
                                0,
                                run,
                            ),
                            "max_evals": problems.cluster_cap(dim),
                            "target_error": 0.0,
                            "measure_time": measure_time,
                        }
                    )
    manifest = {
        "kind": "hopbench-clusters",
        "records": RECORDS_NAME,
        "config": {
            "algorithms": [
                {"name": name, "params": params} for name, params in specs
            ],
            "kinds": list(kinds),
            "sizes": [int(s) for s in sizes],
            "n_runs": n_runs,
            "master_seed": master_seed,
            "coord_bound": coord_bound,
            "budget_factor": problems.BUDGET_FACTOR,
            "measure_time": measure_time,
        },
        "n_cells": len(tasks),
    }
    return _execute(tasks, out_dir, resolve_workers(n_workers), manifest)


def read_records(path: Union[str, Path]) -> list[RunRecord]:
    """Load records from a JSONL file or an experiment directory."""
    path = Path(path)
    if path.is_dir():
        path = path / RECORDS_NAME
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(RunRecord.from_dict(json.loads(line)))
    return records


def read_manifest(directory: Union[str, Path]) -> dict:
    with open(Path(directory) / MANIFEST_NAME, encoding="utf-8") as fh:
        return json.load(fh)
