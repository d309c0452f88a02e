"""Data reduction rules for triangle 2-clubs.

Every rule takes a :class:`Workspace` (graph, triangle index, undo log and, once
built, the conflict graph) and returns a :class:`RuleOutcome`. A rule that would
delete a marked vertex does not delete anything; it reports ``infeasible``
instead and the caller abandons the branch.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Set, Tuple

from . import conflict
from .graph import (
    Graph,
    TriangleIndex,
    UndoLog,
    delete_edge,
    delete_vertex,
    edge_key,
    enumerate_triangles,
    two_neighborhood,
    undo,
)


class Variant(str, enum.Enum):
    VERTEX = "vertex"
    EDGE = "edge"


def min_degree(ell: int, variant: Variant) -> int:
    """Smallest degree a vertex of a nonempty solution can have (0 when unconstrained)."""
    if ell <= 0:
        return 0
    if variant is Variant.EDGE:
        return ell + 1
    d = 2
    while d * (d - 1) // 2 < ell:
        d += 1
    return d


@dataclass
class BranchContext:
    ell: int
    variant: Variant
    k: int = 0
    marked: Set[int] = field(default_factory=set)
    root: Optional[int] = None


@dataclass
class RuleOutcome:
    deleted_vertices: List[int] = field(default_factory=list)
    deleted_edges: List[Tuple[int, int]] = field(default_factory=list)
    newly_marked: List[int] = field(default_factory=list)
    infeasible: bool = False

    @property
    def changed(self) -> bool:
        return bool(self.deleted_vertices or self.deleted_edges or self.newly_marked)

    def absorb(self, other: "RuleOutcome") -> "RuleOutcome":
        self.deleted_vertices.extend(other.deleted_vertices)
        self.deleted_edges.extend(other.deleted_edges)
        self.newly_marked.extend(other.newly_marked)
        self.infeasible = self.infeasible or other.infeasible
        return self


class Workspace:
    """A (local) instance being reduced or searched.

    ``reversible=False`` skips the undo log; used for the global graph, which
    only ever shrinks.
    """

    def __init__(
        self,
        g: Graph,
        ctx: BranchContext,
        idx: Optional[TriangleIndex] = None,
        reversible: bool = True,
        index: bool = True,
    ):
        self.g = g
        self.ctx = ctx
        if idx is None and index:
            idx = enumerate_triangles(g)
        self.idx = idx
        self.log: Optional[UndoLog] = UndoLog() if reversible else None
        self.gc: Optional[conflict.ConflictGraph] = None
        self.stats: Counter = Counter()
        self._marks: List[int] = []

    def build_index(self) -> TriangleIndex:
        self.idx = enumerate_triangles(self.g)
        return self.idx

    def attach_conflict_graph(self) -> conflict.ConflictGraph:
        self.gc = conflict.build(self.g)
        return self.gc

    def remove_vertex(self, v: int) -> bool:
        nbrs = self.g.adj.get(v)
        if nbrs is None:
            return False
        before = list(nbrs) if self.gc is not None else None
        delete_vertex(self.g, self.idx, self.log, v)
        if self.gc is not None:
            conflict.update_after_vertex_deletion(self.gc, self.g, v, before)
        return True

    def remove_vertices(self, vertices: Iterable[int]) -> None:
        """Delete several vertices, updating the conflict graph once at the end."""
        vertices = [v for v in vertices if v in self.g.adj]
        if self.gc is None or len(vertices) < 2:
            for v in vertices:
                self.remove_vertex(v)
            return
        former: Set[int] = set()
        for v in vertices:
            former |= self.g.adj[v]
            delete_vertex(self.g, self.idx, self.log, v)
        conflict.update_after_batch_deletion(self.gc, self.g, vertices, former)

    def remove_edge(self, u: int, w: int) -> bool:
        if not delete_edge(self.g, self.idx, self.log, u, w):
            return False
        if self.gc is not None:
            conflict.update_after_edge_deletion(self.gc, self.g, u, w)
        return True

    def mark(self, u: int) -> None:
        self.ctx.marked.add(u)
        self._marks.append(u)

    def checkpoint(self) -> tuple:
        if self.log is None:
            raise RuntimeError("workspace is not reversible")
        return (
            self.log.checkpoint(),
            self.gc.checkpoint() if self.gc is not None else None,
            len(self._marks),
        )

    def rollback(self, cp: tuple) -> None:
        log_cp, gc_cp, n_marks = cp
        undo(self.g, self.idx, self.log, log_cp)
        if self.gc is not None and gc_cp is not None:
            self.gc.rollback(gc_cp)
        while len(self._marks) > n_marks:
            self.ctx.marked.discard(self._marks.pop())

    def conflict_degree(self, v: int) -> int:
        if self.gc is not None:
            return self.gc.degree(v)
        return self.g.n - len(two_neighborhood(self.g, v))


def _delete_batch(ws: Workspace, batch, out: RuleOutcome, rule: str) -> bool:
    """Delete a collected batch; False (nothing deleted) if it contains a marked vertex."""
    marked = ws.ctx.marked
    if marked and not marked.isdisjoint(batch):
        out.infeasible = True
        return False
    ws.remove_vertices(batch)
    out.deleted_vertices.extend(batch)
    ws.stats[rule] += len(batch)
    return True


def ldr(ws: Workspace, candidates: Optional[List[int]] = None) -> RuleOutcome:
    """Low-Degree Rule: delete vertices too sparse to reach ``ell`` triangles.

    Vertex variant deletes iff C(deg, 2) < ell; edge variant iff deg <= ell.
    """
    out = RuleOutcome()
    dmin = min_degree(ws.ctx.ell, ws.ctx.variant)
    if dmin == 0:
        return out
    adj = ws.g.adj
    if candidates is None:
        candidates = list(adj)
    while candidates:
        batch = sorted({v for v in candidates if v in adj and len(adj[v]) < dmin})
        if not batch:
            break
        touched = set()
        for v in batch:
            touched |= adj[v]
        if not _delete_batch(ws, batch, out, "LDR"):
            return out
        candidates = [v for v in touched if v in adj]
    return out


def ltr(ws: Workspace, exhaustive: bool = True, candidates: Optional[List[int]] = None) -> RuleOutcome:
    """Low-Triangle Rule: delete vertices (vertex variant) or edges (edge variant)
    in fewer than ``ell`` triangles; all violators of one pass go together."""
    if ws.ctx.variant is Variant.EDGE:
        return _ltr_edges(ws, exhaustive, candidates)
    out = RuleOutcome()
    ell = ws.ctx.ell
    if ell <= 0:
        return out
    adj = ws.g.adj
    vc = ws.idx.vertex_count
    if candidates is None:
        candidates = list(adj)
    while candidates:
        batch = sorted({v for v in candidates if v in adj and vc[v] < ell})
        if not batch:
            break
        touched = set()
        for v in batch:
            touched |= adj[v]
        if not _delete_batch(ws, batch, out, "LTR"):
            return out
        if not exhaustive:
            break
        candidates = [v for v in touched if v in adj]
    return out


def _ltr_edges(ws: Workspace, exhaustive: bool, candidates: Optional[List[int]]) -> RuleOutcome:
    out = RuleOutcome()
    ell = ws.ctx.ell
    if ell <= 0:
        return out
    g = ws.g
    adj = g.adj
    ec = ws.idx.edge_count
    marked = ws.ctx.marked
    if candidates is None:
        candidate_edges = None  # scan all edges
        isolated = sorted(v for v, nbrs in adj.items() if not nbrs)
    else:
        candidate_edges = {edge_key(v, x) for v in candidates if v in adj for x in adj[v]}
        isolated = sorted(v for v in candidates if v in adj and not adj[v])
    if isolated and not _delete_batch(ws, isolated, out, "LTR"):
        return out
    while True:
        if candidate_edges is None:
            batch = sorted(e for e, c in ec.items() if c < ell)
        else:
            batch = sorted(e for e in candidate_edges if ec.get(e, ell) < ell)
        if not batch:
            break
        touched: Set[int] = set()
        for u, w in batch:
            touched.add(u)
            touched.add(w)
            touched |= adj[u] & adj[w]
        for u, w in batch:
            ws.remove_edge(u, w)
        out.deleted_edges.extend(batch)
        ws.stats["LTR"] += len(batch)
        isolated = sorted(v for v in touched if v in adj and not adj[v])
        if isolated and not _delete_batch(ws, isolated, out, "LTR"):
            return out
        if not exhaustive:
            break
        candidate_edges = {edge_key(v, x) for v in touched if v in adj for x in adj[v]}
    if marked and ell > 0 and any(not adj[m] for m in marked if m in adj):
        out.infeasible = True
    return out


def irr(ws: Workspace) -> RuleOutcome:
    """Incompatible-Resolution Rule: drop unmarked vertices in conflict with a marked one.

    Deleting them can cut the last short path between a marked vertex and
    another vertex, so the rule repeats until nothing conflicts with a mark.
    """
    out = RuleOutcome()
    marked = ws.ctx.marked
    if not marked:
        return out
    while True:
        victims: Set[int] = set()
        if ws.gc is not None:
            for m in marked:
                victims |= ws.gc.adj[m]
        else:
            live = set(ws.g.adj)
            for m in marked:
                victims |= live - two_neighborhood(ws.g, m)
        victims -= marked
        if not victims:
            return out
        _delete_batch(ws, sorted(victims), out, "IRR")


def mir(ws: Workspace) -> RuleOutcome:
    """Marked-Incompatible Rule: two incompatible marked vertices kill the branch."""
    out = RuleOutcome()
    marked = ws.ctx.marked
    if len(marked) < 2:
        return out
    if ws.gc is not None:
        out.infeasible = any(not ws.gc.adj[m].isdisjoint(marked) for m in marked)
    else:
        for m in marked:
            if not marked <= two_neighborhood(ws.g, m):
                out.infeasible = True
                break
    if out.infeasible:
        ws.stats["MIR"] += 1
    return out


def cascading_rule(ws: Workspace) -> RuleOutcome:
    """Cascading Rule: mark u when a marked v would drop below ``ell`` triangles without u."""
    out = RuleOutcome()
    ell = ws.ctx.ell
    if ell <= 0:
        return out
    marked = ws.ctx.marked
    adj = ws.g.adj
    vc, ec = ws.idx.vertex_count, ws.idx.edge_count
    pending = sorted(marked)
    while pending:
        v = pending.pop()
        xv = vc[v]
        if xv < ell:
            # every unmarked vertex would qualify; v cannot be in any solution
            out.infeasible = True
            return out
        for u in sorted(adj[v]):
            if u not in marked and xv - ec[edge_key(u, v)] < ell:
                ws.mark(u)
                out.newly_marked.append(u)
                pending.append(u)
    ws.stats["CR"] += len(out.newly_marked)
    return out


def no_choice_rule(ws: Workspace) -> RuleOutcome:
    """No-Choice Rule: the unique common neighbor of two non-adjacent marked vertices is marked."""
    out = RuleOutcome()
    marked = ws.ctx.marked
    adj = ws.g.adj
    changed = True
    while changed:
        changed = False
        ms = sorted(marked)
        for i, u in enumerate(ms):
            nu = adj[u]
            for w in ms[i + 1:]:
                if w in nu:
                    continue
                common = nu & adj[w]
                if len(common) == 1:
                    (x,) = common
                    if x not in marked:
                        ws.mark(x)
                        out.newly_marked.append(x)
                        changed = True
                elif not common:
                    out.infeasible = True
                    return out
            if changed:
                break
    ws.stats["NCR"] += len(out.newly_marked)
    return out


def two_nr(ws: Workspace) -> RuleOutcome:
    """2-Neighborhood Rule: delete vertices with |N2[v]| <= k."""
    out = RuleOutcome()
    k = ws.ctx.k
    if k <= 0:
        return out
    adj = ws.g.adj
    candidates = list(adj)
    while candidates:
        batch = []
        for v in candidates:
            nv = adj.get(v)
            if nv is None or len(nv) >= k:
                continue
            if 1 + len(nv) + sum(len(adj[u]) - 1 for u in nv) <= k:
                batch.append(v)
            elif len(two_neighborhood(ws.g, v)) <= k:
                batch.append(v)
        if not batch:
            break
        batch = sorted(set(batch))
        touched: Set[int] = set()
        for v in batch:
            touched |= two_neighborhood(ws.g, v)
        if not _delete_batch(ws, batch, out, "2-NR"):
            return out
        candidates = [v for v in touched if v in adj]
    return out


def lcr(ws: Workspace) -> RuleOutcome:
    """Low-Compatibility Rule: delete vertices with conflict degree >= n - k + 1."""
    out = RuleOutcome()
    gc = ws.gc
    if gc is None or ws.ctx.k <= 0:
        return out
    while True:
        threshold = ws.g.n - ws.ctx.k + 1
        batch = sorted(v for v, nbrs in gc.adj.items() if len(nbrs) >= threshold)
        if not batch:
            break
        if not _delete_batch(ws, batch, out, "LCR"):
            return out
    return out


def matching_bound(gc: conflict.ConflictGraph, exact: bool = False) -> int:
    """Upper bound |V(Gc)| - |matching| on any solution in this instance."""
    matching = conflict.maximum_matching(gc) if exact else conflict.greedy_maximal_matching(gc)
    return len(gc) - len(matching)


def establish_triangle_property(ws: Workspace) -> RuleOutcome:
    """Staged loop: LCR (then LDR), one LTR pass (then LDR), until a cycle deletes nothing."""
    out = RuleOutcome()
    while True:
        step = lcr(ws)
        out.absorb(step)
        if out.infeasible:
            return out
        if step.changed:
            out.absorb(ldr(ws))
            if out.infeasible:
                return out
            continue
        step = ltr(ws, exhaustive=False)
        out.absorb(step)
        if out.infeasible:
            return out
        if step.changed:
            out.absorb(ldr(ws))
            if out.infeasible:
                return out
            continue
        return out


def basic_rules(ws: Workspace) -> RuleOutcome:
    """LDR exhaustively, then single LTR passes, each followed by LDR, to a fixpoint."""
    out = ldr(ws)
    while not out.infeasible:
        step = ltr(ws, exhaustive=False)
        out.absorb(step)
        if not step.changed or out.infeasible:
            break
        out.absorb(ldr(ws))
    return out


def apply_node_rules(
    ws: Workspace,
    neighborhood: Optional[str] = "2-NR",
    use_matching: bool = False,
    exact_matching: bool = False,
) -> RuleOutcome:
    """Sweep basic rules, LCR or 2-NR, the marking rules and the matching bound until stable.

    ``neighborhood`` picks "2-NR", "LCR" (needs the conflict graph) or None.
    """
    rules = [ldr, ltr]
    if neighborhood == "2-NR":
        rules.append(two_nr)
    elif neighborhood == "LCR":
        rules.append(lcr)
    elif neighborhood is not None:
        raise ValueError(f"unknown neighborhood rule {neighborhood!r}")
    rules += [irr, mir, cascading_rule, no_choice_rule]
    out = RuleOutcome()
    ctx = ws.ctx
    while True:
        sweep = RuleOutcome()
        for rule in rules:
            sweep.absorb(rule(ws))
            if sweep.infeasible:
                return out.absorb(sweep)
        out.absorb(sweep)
        if ws.g.n <= ctx.k:
            out.infeasible = True
            return out
        if use_matching and ws.gc is not None and ctx.k > 0:
            if matching_bound(ws.gc, exact_matching) <= ctx.k:
                ws.stats["Matching"] += 1
                out.infeasible = True
                return out
        if not sweep.changed:
            return out
