"""Analysis of benchmark run records: metrics, tests, and reports."""
from .metrics import (
    ScoreRow,
    ScoreTable,
    build_score_table,
    ecdf_curve,
    error_at_budget,
    hitting_time,
    logscore,
    pooled_best_errors,
    sr_ar_ert,
    value_at_budget,
)
from .reports import (
    DEFAULT_BUDGETS,
    DEFAULT_TARGETS,
    ReportBundle,
    eval_grid,
    make_reports,
    rank_cliques,
)
from .stats import (
    FriedmanResult,
    TestResult,
    average_ranks,
    benjamini_hochberg,
    friedman_conover,
    mann_whitney_u,
    wilcoxon_signed_rank,
)

__all__ = [
    "ScoreRow",
    "ScoreTable",
    "build_score_table",
    "ecdf_curve",
    "error_at_budget",
    "hitting_time",
    "logscore",
    "pooled_best_errors",
    "sr_ar_ert",
    "value_at_budget",
    "DEFAULT_BUDGETS",
    "DEFAULT_TARGETS",
    "ReportBundle",
    "eval_grid",
    "make_reports",
    "rank_cliques",
    "FriedmanResult",
    "TestResult",
    "average_ranks",
    "benjamini_hochberg",
    "friedman_conover",
    "mann_whitney_u",
    "wilcoxon_signed_rank",
]
