"""Cohesion metrics of a solution: density and clustering coefficients of G[S]."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import Graph, induced_subgraph


@dataclass(frozen=True)
class SolutionMetrics:
    density: Optional[float]
    global_cc: Optional[float]
    min_local_cc: Optional[float]


def compute_metrics(g: Graph, S: Iterable[int]) -> SolutionMetrics:
    """Density, global and smallest local clustering coefficient of G[S].

    Conventions: a singleton has density 1; a vertex of degree < 2 has local
    coefficient 1; the global coefficient is 0 without wedges. The empty set
    has no metrics (all None).
    """
    h = induced_subgraph(g, S)
    n = h.n
    if n == 0:
        return SolutionMetrics(None, None, None)
    density = 1.0 if n == 1 else h.m / (n * (n - 1) / 2)
    wedges = 0
    closed = 0  # each triangle is seen once per corner
    min_local = 1.0
    adj = h.adj
    for v, nbrs in adj.items():
        d = len(nbrs)
        if d < 2:
            continue
        pairs = d * (d - 1) // 2
        links = sum(len(adj[u] & nbrs) for u in nbrs) // 2
        wedges += pairs
        closed += links
        min_local = min(min_local, links / pairs)
    global_cc = closed / wedges if wedges else 0.0
    return SolutionMetrics(density, global_cc, min_local)


@dataclass
class MetricsRecord:
    """One benchmark row; field order is the column order of the results file."""

    instance: str
    n: int
    m: int
    density: float
    ell: int
    variant: str
    algorithm: str
    size: int
    solve_time: float
    preprocessing_fraction: float
    nlb_value: Optional[int]
    multilb_value: Optional[int]
    nlb_quality: Optional[float]
    multilb_quality: Optional[float]
    solution_density: Optional[float]
    global_cc: Optional[float]
    min_local_cc: Optional[float]
    proven_optimal: bool


TIMING_COLUMNS = ("solve_time", "preprocessing_fraction")


def bound_quality(bound: Optional[int], optimum: int) -> Optional[float]:
    """bound / optimum; 1.0 when both are 0 (the bound is trivially exact)."""
    if bound is None:
        return None
    if optimum == 0:
        return 1.0 if bound == 0 else None
    return bound / optimum
