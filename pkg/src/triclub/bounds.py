"""Lower-bound heuristics: neighborhood peeling, greedy conflict deletion, and their combination."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Optional, Set, Tuple

from .conflict import greedy_maximal_matching
from .graph import Graph, induced_subgraph, two_neighborhood
from .reductions import (
    BranchContext,
    Variant,
    Workspace,
    basic_rules,
    establish_triangle_property,
    lcr,
    ldr,
    ltr,
    two_nr,
)

Edge = Tuple[int, int]


@dataclass
class BoundResult:
    value: int = 0
    witness: FrozenSet[int] = frozenset()
    witness_edges: Optional[FrozenSet[Edge]] = None
    per_root: Dict[int, int] = field(default_factory=dict)
    complete: bool = True

    def offer(self, root: int, ws: Workspace) -> bool:
        """Record the surviving vertex set of ``ws`` as root's candidate; True if it is a new best."""
        size = ws.g.n
        self.per_root[root] = size
        if size <= self.value:
            return False
        self.value = size
        self.witness = frozenset(ws.g.adj)
        if ws.ctx.variant is Variant.EDGE:
            self.witness_edges = frozenset(ws.g.edges())
        return True


def _expired(deadline: Optional[float]) -> bool:
    return deadline is not None and time.perf_counter() > deadline


def _by_two_neighborhood(g: Graph) -> list:
    sizes = {v: len(two_neighborhood(g, v)) for v in g.adj}
    return sorted(g.adj, key=lambda v: (-sizes[v], v))


def neighborhood_lower_bound(
    g: Graph,
    ell: int,
    variant: Variant,
    prune: bool = True,
    deadline: Optional[float] = None,
) -> BoundResult:
    """N-LB: for each root v, peel G[N[v]] with the LTR and keep the survivors if v survives.

    With ``prune`` a root whose closed neighborhood cannot beat the current best
    is skipped (and gets no ``per_root`` entry).
    """
    variant = Variant(variant)
    result = BoundResult()
    for v in sorted(g.adj):
        if _expired(deadline):
            result.complete = False
            break
        nbrs = g.adj[v]
        if prune and len(nbrs) + 1 <= result.value:
            continue
        local = induced_subgraph(g, nbrs | {v})
        ws = Workspace(local, BranchContext(ell, variant, marked={v}, root=v), reversible=False)
        if ltr(ws).infeasible or v not in local.adj:
            result.per_root[v] = 0
            continue
        result.offer(v, ws)
    return result


def _victim(ws: Workspace, a: int, b: int, root: int) -> int:
    if a == root:
        return b
    if b == root:
        return a
    if ws.ctx.variant is Variant.VERTEX:
        score = ws.idx.vertex_count
        sa, sb = score[a], score[b]
    else:
        sa, sb = len(ws.g.adj[a]), len(ws.g.adj[b])
    if sa != sb:
        return a if sa < sb else b
    return max(a, b)


def greedy_lower_bound(
    g: Graph,
    ell: int,
    variant: Variant,
    seed_k: int = 0,
    deadline: Optional[float] = None,
) -> BoundResult:
    """G-LB: inside each G[N2[v]], delete one endpoint of a conflict pair at a time
    (re-peeling with the LTR) until no conflict is left."""
    variant = Variant(variant)
    result = BoundResult()
    best = seed_k
    for v in _by_two_neighborhood(g):
        if _expired(deadline):
            result.complete = False
            break
        n2 = two_neighborhood(g, v)
        if len(n2) <= best:
            continue
        local = induced_subgraph(g, n2)
        ws = Workspace(local, BranchContext(ell, variant, marked={v}, root=v), reversible=False)
        if ldr(ws).infeasible or ltr(ws).infeasible:
            result.per_root[v] = 0
            continue
        gc = ws.attach_conflict_graph()
        alive = True
        while gc.num_edges:
            a, b = gc.first_edge()
            ws.remove_vertex(_victim(ws, a, b, v))
            if ltr(ws).infeasible or v not in local.adj:
                alive = False
                break
        if not alive:
            result.per_root[v] = 0
            continue
        if result.offer(v, ws):
            best = max(best, result.value)
    return result


def remove_from_global(gws: Workspace, vertices: Iterable[int]) -> None:
    """Delete vertices from the global graph and re-establish the basic rules around them."""
    touched: Set[int] = set()
    adj = gws.g.adj
    for v in vertices:
        nbrs = adj.get(v)
        if nbrs is None:
            continue
        touched |= nbrs
        gws.remove_vertex(v)
    touched &= adj.keys()
    if touched:
        candidates = sorted(touched)
        out = ldr(gws, candidates)
        out.absorb(ltr(gws, candidates=candidates))
        if out.changed:
            basic_rules(gws)


def reduce_global(gws: Workspace) -> None:
    """2-NR with the current k alternated with the basic rules until neither changes anything."""
    basic_rules(gws)
    while True:
        if not two_nr(gws).changed:
            return
        if not basic_rules(gws).changed:
            return


def _lcr_ldr_fixpoint(ws: Workspace) -> bool:
    """Alternate LCR and LDR until neither deletes anything; True if the root dies."""
    while True:
        step = lcr(ws)
        if step.infeasible:
            return True
        if not step.changed:
            return False
        if ldr(ws).infeasible:
            return True


def greedy_stage(
    gws: Workspace,
    best: BoundResult,
    deadline: Optional[float] = None,
) -> BoundResult:
    """The matching-driven greedy bound run root by root on the global graph.

    Roots that the reduction rules alone show to be hopeless (no solution larger
    than the current bound contains them) are deleted from the global graph.
    ``best`` is updated in place and returned.
    """
    g = gws.g
    ell, variant = gws.ctx.ell, gws.ctx.variant
    for v in _by_two_neighborhood(g):
        if _expired(deadline):
            best.complete = False
            break
        if v not in g.adj:
            continue
        n2 = two_neighborhood(g, v)
        if len(n2) <= best.value:
            remove_from_global(gws, [v])
            continue
        local = induced_subgraph(g, n2)
        ctx = BranchContext(ell, variant, k=best.value, marked={v}, root=v)
        ws = Workspace(local, ctx, reversible=False, index=False)
        hopeless = ldr(ws).infeasible
        first = True
        if not hopeless:
            ws.attach_conflict_graph()
            # LCR and LDR need no triangle counts; index what survives them
            hopeless = _lcr_ldr_fixpoint(ws)
        if not hopeless:
            ws.build_index()
            while True:
                if establish_triangle_property(ws).infeasible:
                    hopeless = first
                    break
                if first and local.n <= best.value:
                    hopeless = True
                    break
                first = False
                if not ws.gc.num_edges:
                    best.offer(v, ws)
                    break
                for a, b in greedy_maximal_matching(ws.gc):
                    ws.remove_vertex(_victim(ws, a, b, v))
        if hopeless:
            remove_from_global(gws, [v])
        gws.stats.update(ws.stats)
    return best


def multi_lb(
    g: Graph,
    ell: int,
    variant: Variant,
    deadline: Optional[float] = None,
) -> BoundResult:
    """N-LB, then basic rules and 2-NR with its value, then the greedy stage."""
    variant = Variant(variant)
    gws = Workspace(g.copy(), BranchContext(ell, variant), reversible=False)
    basic_rules(gws)
    best = neighborhood_lower_bound(gws.g, ell, variant, deadline=deadline)
    gws.ctx.k = best.value
    reduce_global(gws)
    if best.complete:
        greedy_stage(gws, best, deadline)
    return best
