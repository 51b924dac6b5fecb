"""hopbench: basin-hopping and metaheuristic global-optimization benchmark.

A self-contained toolkit for comparing global optimizers (basin hopping and
population variants, differential evolution, particle swarm, CMA-ES) on a
24-function synthetic benchmark suite and on Lennard-Jones / Morse atomic
cluster problems, with deterministic seeding, fixed-budget and fixed-target
analysis, and a nonparametric statistical test battery.
"""
from .core import (
    Bounds,
    BudgetExhausted,
    EvalBudget,
    Evaluator,
    ObjectiveError,
    Problem,
    StopRun,
    TargetReached,
    Trajectory,
    clip_to_bounds,
    make_rng,
    mix_seed,
)
from .harness import (
    ExperimentConfig,
    RunRecord,
    read_manifest,
    read_records,
    run_clusters,
    run_experiment,
    run_single,
)
from .local_search import LBFGSB, LocalMinResult, NelderMead, fd_gradient
from .optimizers import (
    ALGORITHMS,
    DEFAULT_ALGORITHMS,
    BasinHopping,
    CMAES,
    DifferentialEvolution,
    GenerationalBasinHopping,
    ParticleSwarm,
    PopulationBasinHopping,
    RandomSearch,
    RunResult,
    make_optimizer,
)
from .problems import (
    get_problem,
    lj_energy,
    make_cluster_problem,
    make_instance,
    morse_energy,
    problem_catalog,
    register_problem,
    registered_problems,
    unregister_problem,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Bounds",
    "BudgetExhausted",
    "EvalBudget",
    "Evaluator",
    "ObjectiveError",
    "Problem",
    "StopRun",
    "TargetReached",
    "Trajectory",
    "clip_to_bounds",
    "make_rng",
    "mix_seed",
    "ExperimentConfig",
    "RunRecord",
    "read_manifest",
    "read_records",
    "run_clusters",
    "run_experiment",
    "run_single",
    "LBFGSB",
    "LocalMinResult",
    "NelderMead",
    "fd_gradient",
    "ALGORITHMS",
    "DEFAULT_ALGORITHMS",
    "BasinHopping",
    "CMAES",
    "DifferentialEvolution",
    "GenerationalBasinHopping",
    "ParticleSwarm",
    "PopulationBasinHopping",
    "RandomSearch",
    "RunResult",
    "make_optimizer",
    "get_problem",
    "lj_energy",
    "make_cluster_problem",
    "make_instance",
    "morse_energy",
    "problem_catalog",
    "register_problem",
    "registered_problems",
    "unregister_problem",
]
