"""Exact solver: decomposition over 2-neighborhoods plus marked branching."""

from __future__ import annotations

import enum
import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Mapping, Optional, Set, Tuple

from .bounds import (
    BoundResult,
    greedy_stage,
    neighborhood_lower_bound,
    reduce_global,
    remove_from_global,
)
from .graph import (
    Graph,
    delete_edge,
    enumerate_triangles,
    induced_subgraph,
    two_neighborhood,
)
from .reductions import (
    BranchContext,
    Variant,
    Workspace,
    apply_node_rules,
    basic_rules,
    ldr,
)

log = logging.getLogger(__name__)

Edge = Tuple[int, int]


class ConfigError(ValueError):
    pass


class Algorithm(str, enum.Enum):
    BASIC = "basic"
    BASIC_UB = "basic-ub"
    NLB = "nlb"
    MULTI_LB = "multi-lb"


@dataclass
class Instance:
    graph: Graph
    ell: int
    variant: Variant = Variant.VERTEX

    def __post_init__(self):
        if self.ell < 0:
            raise ConfigError(f"ell must be nonnegative, got {self.ell}")
        try:
            self.variant = Variant(self.variant)
        except ValueError:
            raise ConfigError(f"unknown variant {self.variant!r}") from None


@dataclass
class SolverConfig:
    algorithm: Algorithm = Algorithm.NLB
    density_threshold: float = 0.05
    time_limit: Optional[float] = None
    exact_matching: bool = False
    # restrict the Matching Rule to the root node of each search tree
    matching_root_only: bool = False

    def __post_init__(self):
        try:
            self.algorithm = Algorithm(self.algorithm)
        except ValueError:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}") from None
        if not 0.0 <= self.density_threshold <= 1.0:
            raise ConfigError(f"density_threshold must lie in [0, 1], got {self.density_threshold}")
        if self.time_limit is not None and self.time_limit < 0:
            raise ConfigError("time_limit must be nonnegative")


@dataclass
class SolveStats:
    nodes: int = 0
    roots_branched: int = 0
    rule_firings: Counter = field(default_factory=Counter)
    wall_time: float = 0.0
    preprocessing_time: float = 0.0
    nlb_value: Optional[int] = None
    multilb_value: Optional[int] = None

    @property
    def preprocessing_fraction(self) -> float:
        if self.wall_time <= 0:
            return 0.0
        return min(1.0, self.preprocessing_time / self.wall_time)


@dataclass
class Solution:
    vertices: FrozenSet[int]
    witness_edges: Optional[FrozenSet[Edge]] = None
    proven_optimal: bool = True
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def size(self) -> int:
        return len(self.vertices)


class SolverTimeout(Exception):
    pass


def verify_solution(g: Graph, S: Iterable[int], ell: int, variant: Variant) -> Tuple[bool, Optional[Set[Edge]]]:
    """Check S against the definition; for the edge variant also return the maximal witness.

    The witness is the fixpoint of peeling edges of G[S] in fewer than ``ell``
    triangles: triangle-closed edge sets are closed under union, so any valid
    witness survives the peel. A singleton qualifies only when ``ell == 0``.
    """
    S = set(S)
    variant = Variant(variant)
    if not S <= g.adj.keys():
        raise ValueError(f"vertices {sorted(S - g.adj.keys())[:5]} not in graph")
    edge = variant is Variant.EDGE
    if not S:
        return True, (set() if edge else None)
    if len(S) == 1:
        return ell == 0, (set() if edge else None)
    h = induced_subgraph(g, S)
    idx = enumerate_triangles(h)
    if edge:
        while True:
            low = [e for e, c in idx.edge_count.items() if c < ell]
            if not low:
                break
            for u, w in low:
                delete_edge(h, idx, None, u, w)
    elif any(c < ell for c in idx.vertex_count.values()):
        return False, None
    n = h.n
    ok = all(len(two_neighborhood(h, v)) == n for v in h.adj)
    return ok, (set(h.edges()) if edge else None)


def select_branching_vertex(conflict_degrees: Mapping[int, int], marked: Set[int]) -> Optional[int]:
    """Unmarked vertex of maximum conflict degree, smallest id on ties; None if no unmarked conflicts."""
    best = None
    best_deg = 0
    for v in sorted(conflict_degrees):
        d = conflict_degrees[v]
        if v not in marked and d > best_deg:
            best, best_deg = v, d
    return best


def _conflict_degrees(ws: Workspace) -> dict:
    if ws.gc is not None:
        return {v: len(nbrs) for v, nbrs in ws.gc.adj.items()}
    n = ws.g.n
    return {v: n - len(two_neighborhood(ws.g, v)) for v in ws.g.adj}


class _Search:
    """Per-solve settings and counters shared by all search-tree nodes."""

    def __init__(self, cfg: SolverConfig, stats: SolveStats, deadline: Optional[float]):
        self.cfg = cfg
        self.stats = stats
        self.deadline = deadline
        self.use_conflict_graph = cfg.algorithm is not Algorithm.BASIC

    def check_time(self) -> None:
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise SolverTimeout

    def solve_root(self, g: Graph, n2: Set[int], root: int, ell: int, variant: Variant, k: int):
        local = induced_subgraph(g, n2)
        neighborhood = "2-NR"
        if self.use_conflict_graph and local.density() > self.cfg.density_threshold:
            neighborhood = "LCR"
        ctx = BranchContext(ell, variant, k=k, marked={root}, root=root)
        ws = Workspace(local, ctx)
        try:
            # cheap rules first so the conflict graph is built on the reduced instance
            pre = apply_node_rules(ws, neighborhood="2-NR" if neighborhood == "2-NR" else None)
            if pre.infeasible:
                return None
            if self.use_conflict_graph:
                ws.attach_conflict_graph()
            self.stats.roots_branched += 1
            return self.branch(ws, neighborhood, depth=0)
        finally:
            self.stats.rule_firings.update(ws.stats)

    def branch(self, ws: Workspace, neighborhood: str, depth: int) -> Optional[FrozenSet[int]]:
        """Largest triangle 2-club of ws.g that contains every marked vertex and beats ctx.k."""
        self.check_time()
        self.stats.nodes += 1
        cfg = self.cfg
        use_matching = self.use_conflict_graph and (depth == 0 or not cfg.matching_root_only)
        out = apply_node_rules(ws, neighborhood, use_matching, cfg.exact_matching)
        if out.infeasible:
            return None
        ctx = ws.ctx
        if ws.gc is not None:
            if not ws.gc.num_edges:
                return frozenset(ws.g.adj)
            u = select_branching_vertex({v: len(c) for v, c in ws.gc.adj.items()}, ctx.marked)
        else:
            u = select_branching_vertex(_conflict_degrees(ws), ctx.marked)
            if u is None:
                return frozenset(ws.g.adj)
        if u is None:
            # conflicts only between marked vertices; the MIR already rules this out
            return None
        cp = ws.checkpoint()
        ws.remove_vertex(u)
        found = self.branch(ws, neighborhood, depth + 1)
        ws.rollback(cp)
        if found is not None:
            ctx.k = len(found)
        ws.mark(u)
        better = self.branch(ws, neighborhood, depth + 1)
        ws.rollback(cp)
        return better if better is not None else found


def marked_branching(
    g_v: Graph,
    ell: int,
    variant: Variant,
    marked: Iterable[int],
    k: int = 0,
    cfg: Optional[SolverConfig] = None,
) -> Optional[FrozenSet[int]]:
    """Largest triangle 2-club of ``g_v`` containing ``marked`` with more than ``k`` vertices.

    Returns None when no such set exists (distinct from an empty solution).
    ``g_v`` is not modified.
    """
    cfg = cfg or SolverConfig()
    marked = set(marked)
    if not marked <= g_v.adj.keys():
        raise ValueError("marked vertices must belong to the graph")
    search = _Search(cfg, SolveStats(), None)
    root = min(marked) if marked else None
    ctx = BranchContext(ell, Variant(variant), k=k, marked=marked, root=root)
    ws = Workspace(g_v.copy(), ctx)
    neighborhood = "2-NR"
    if search.use_conflict_graph:
        ws.attach_conflict_graph()
        if g_v.density() > cfg.density_threshold:
            neighborhood = "LCR"
    found = search.branch(ws, neighborhood, depth=0)
    if found is not None and len(found) <= k:
        return None
    return found


def solve(inst: Instance, cfg: Optional[SolverConfig] = None) -> Solution:
    """Maximum triangle 2-club of ``inst`` (best found so far if the time limit fires)."""
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    deadline = start + cfg.time_limit if cfg.time_limit is not None else None
    ell, variant = inst.ell, inst.variant
    stats = SolveStats()
    search = _Search(cfg, stats, deadline)

    g = inst.graph.copy()
    gws = Workspace(g, BranchContext(ell, variant), reversible=False, index=False)
    best = BoundResult()
    optimal = True
    try:
        ldr(gws)
        gws.build_index()
        basic_rules(gws)
        if cfg.algorithm in (Algorithm.NLB, Algorithm.MULTI_LB):
            best = neighborhood_lower_bound(g, ell, variant, deadline=deadline)
            stats.nlb_value = best.value
            if not best.complete:
                raise SolverTimeout
            gws.ctx.k = best.value
            reduce_global(gws)
        if cfg.algorithm is Algorithm.MULTI_LB:
            greedy_stage(gws, best, deadline)
            stats.multilb_value = best.value
            if not best.complete:
                raise SolverTimeout
            gws.ctx.k = best.value
            reduce_global(gws)
        stats.preprocessing_time = time.perf_counter() - start

        k = best.value
        sizes = {v: len(two_neighborhood(g, v)) for v in g.adj}
        for v in sorted(g.adj, key=lambda v: (-sizes[v], v)):
            search.check_time()
            if v not in g.adj:
                continue
            n2 = two_neighborhood(g, v)
            if len(n2) > k:
                found = search.solve_root(g, n2, v, ell, variant, k)
                if found is not None and len(found) > k:
                    best.value = k = len(found)
                    best.witness = found
                    log.debug("root %d: new best %d", v, k)
            remove_from_global(gws, [v])
    except SolverTimeout:
        optimal = False
        if not stats.preprocessing_time:
            stats.preprocessing_time = time.perf_counter() - start
    stats.rule_firings.update(gws.stats)
    stats.wall_time = time.perf_counter() - start

    witness_edges = None
    if variant is Variant.EDGE:
        ok, witness_edges = verify_solution(inst.graph, best.witness, ell, variant)
        witness_edges = frozenset(witness_edges)
    return Solution(frozenset(best.witness), witness_edges, optimal, stats)
