"""Least-weight subsequence laboratory: solvers, reductions and oracles."""
from .core import (
    ExplicitModel,
    FunctionModel,
    LowRankModel,
    ReductionArtifact,
    StaticQuery,
    ToeplitzModel,
    WeightModel,
    WorkStats,
    check_table,
    solve_naive,
    solve_static_naive,
    solve_via_static,
)
from .ext import INF, NEG_INF, ArithmeticOverflow

__all__ = [
    "INF",
    "NEG_INF",
    "ArithmeticOverflow",
    "ExplicitModel",
    "FunctionModel",
    "LowRankModel",
    "ReductionArtifact",
    "StaticQuery",
    "ToeplitzModel",
    "WeightModel",
    "WorkStats",
    "check_table",
    "solve_naive",
    "solve_static_naive",
    "solve_via_static",
]
