"""Exact maximum vertex and edge triangle 2-clubs."""

from .graph import Graph, TriangleIndex, UndoLog, degeneracy_ordering, enumerate_triangles, two_neighborhood
from .metrics import MetricsRecord, compute_metrics
from .reductions import Variant
from .solver import (
    Algorithm,
    ConfigError,
    Instance,
    Solution,
    SolverConfig,
    solve,
    verify_solution,
)

__all__ = [
    "Algorithm",
    "ConfigError",
    "Graph",
    "Instance",
    "MetricsRecord",
    "Solution",
    "SolverConfig",
    "TriangleIndex",
    "UndoLog",
    "Variant",
    "compute_metrics",
    "degeneracy_ordering",
    "enumerate_triangles",
    "solve",
    "two_neighborhood",
    "verify_solution",
]
