"""Mutable undirected simple graphs with reversible deletions and live triangle counters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple

Edge = Tuple[int, int]


def edge_key(u: int, w: int) -> Edge:
    return (u, w) if u < w else (w, u)


class Graph:
    """Undirected simple graph on integer vertex ids, stored as neighbor sets."""

    __slots__ = ("adj", "m")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Tuple[int, int]] = ()):
        self.adj: Dict[int, Set[int]] = {}
        self.m = 0
        for v in vertices:
            self.add_vertex(v)
        for u, w in edges:
            self.add_edge(u, w)

    @property
    def n(self) -> int:
        return len(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    def __contains__(self, v: object) -> bool:
        return v in self.adj

    def __iter__(self) -> Iterator[int]:
        return iter(self.adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.m == other.m and self.adj == other.adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def vertices(self) -> Set[int]:
        return set(self.adj)

    def edges(self) -> Iterator[Edge]:
        for u, nbrs in self.adj.items():
            for w in nbrs:
                if u < w:
                    yield (u, w)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, w: int) -> bool:
        nbrs = self.adj.get(u)
        return nbrs is not None and w in nbrs

    def add_vertex(self, v: int) -> None:
        if v < 0:
            raise ValueError(f"vertex ids must be nonnegative, got {v}")
        self.adj.setdefault(v, set())

    def add_edge(self, u: int, w: int) -> None:
        if u == w:
            raise ValueError(f"self-loop on {u}")
        self.add_vertex(u)
        self.add_vertex(w)
        if w not in self.adj[u]:
            self.adj[u].add(w)
            self.adj[w].add(u)
            self.m += 1

    def copy(self) -> "Graph":
        g = Graph()
        g.adj = {v: set(nbrs) for v, nbrs in self.adj.items()}
        g.m = self.m
        return g

    def density(self) -> float:
        n = self.n
        if n < 2:
            return 0.0
        return self.m / (n * (n - 1) / 2)


@dataclass
class TriangleIndex:
    """Triangle counts per vertex and per edge.

    The triangles through a vertex are not stored; deletions recover them
    from the adjacency sets (``triangles_at``).
    """

    vertex_count: Dict[int, int] = field(default_factory=dict)
    edge_count: Dict[Edge, int] = field(default_factory=dict)

    def count(self, v: int) -> int:
        return self.vertex_count[v]

    def edge(self, u: int, w: int) -> int:
        return self.edge_count[edge_key(u, w)]

    def total(self) -> int:
        return sum(self.vertex_count.values()) // 3

    def snapshot(self) -> tuple:
        return dict(self.vertex_count), dict(self.edge_count)


def triangles_at(g: Graph, v: int) -> List[Edge]:
    """Opposite edges (p, q), p < q, of the triangles through ``v``."""
    adj = g.adj
    nbrs = adj[v]
    return [(p, q) for p in nbrs for q in adj[p] & nbrs if p < q]


@dataclass
class Checkpoint:
    owner: "UndoLog"
    depth: int


class UndoLog:
    """Stack of reversible graph mutations."""

    def __init__(self) -> None:
        self.entries: List[tuple] = []

    def __len__(self) -> int:
        return len(self.entries)

    def checkpoint(self) -> Checkpoint:
        return Checkpoint(self, len(self.entries))


@dataclass
class DegeneracyOrdering:
    order: List[int]
    degeneracy: int
    forward: Dict[int, Set[int]]

    def position(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}


def degeneracy_ordering(g: Graph) -> DegeneracyOrdering:
    """Min-degree peeling with degree buckets, linear in n + m."""
    deg = {v: len(nbrs) for v, nbrs in g.adj.items()}
    max_deg = max(deg.values(), default=0)
    # dict buckets: O(1) removal and deterministic insertion-order pops
    buckets: List[Dict[int, None]] = [{} for _ in range(max_deg + 1)]
    for v in sorted(deg):
        buckets[deg[v]][v] = None
    removed: Set[int] = set()
    order: List[int] = []
    d_max = 0
    lo = 0
    for _ in range(g.n):
        while not buckets[lo]:
            lo += 1
        v = next(iter(buckets[lo]))
        del buckets[lo][v]
        d_max = max(d_max, lo)
        order.append(v)
        removed.add(v)
        for w in g.adj[v]:
            if w not in removed:
                dw = deg[w]
                del buckets[dw][w]
                deg[w] = dw - 1
                buckets[dw - 1][w] = None
        if lo > 0:
            lo -= 1
    pos = {v: i for i, v in enumerate(order)}
    forward = {v: {w for w in g.adj[v] if pos[w] > pos[v]} for v in order}
    return DegeneracyOrdering(order, d_max, forward)


def enumerate_triangles(g: Graph) -> TriangleIndex:
    """List every triangle once via forward neighbors of a degeneracy ordering."""
    ordering = degeneracy_ordering(g)
    forward = ordering.forward
    idx = TriangleIndex(
        vertex_count=dict.fromkeys(g.adj, 0),
        edge_count={e: 0 for e in g.edges()},
    )
    vc, ec = idx.vertex_count, idx.edge_count
    for v in ordering.order:
        fv = forward[v]
        for u in fv:
            common = fv & forward[u]
            if not common:
                continue
            k = len(common)
            vc[v] += k
            vc[u] += k
            ec[(v, u) if v < u else (u, v)] += k
            for w in common:
                vc[w] += 1
                ec[(v, w) if v < w else (w, v)] += 1
                ec[(u, w) if u < w else (w, u)] += 1
    return idx


def delete_vertex(g: Graph, idx: Optional[TriangleIndex], log: Optional[UndoLog], v: int) -> bool:
    """Delete ``v`` and its edges. Returns False (and changes nothing) if ``v`` is absent."""
    if v not in g.adj:
        return False
    tris = triangles_at(g, v) if idx is not None else None
    nbrs = g.adj.pop(v)
    for w in nbrs:
        g.adj[w].discard(v)
    g.m -= len(nbrs)
    if idx is not None:
        del idx.vertex_count[v]
        vc, ec = idx.vertex_count, idx.edge_count
        incident = {}
        for w in nbrs:
            incident[w] = ec.pop(edge_key(v, w))
        for pq in tris:
            p, q = pq
            vc[p] -= 1
            vc[q] -= 1
            ec[pq] -= 1
    else:
        tris = incident = None
    if log is not None:
        log.entries.append(("V", v, nbrs, tris, incident))
    return True


def delete_edge(g: Graph, idx: Optional[TriangleIndex], log: Optional[UndoLog], u: int, w: int) -> bool:
    """Delete edge ``uw``. Returns False (and changes nothing) if the edge is absent."""
    nu = g.adj.get(u)
    if nu is None or w not in nu:
        return False
    nw = g.adj[w]
    commons = nu & nw
    nu.discard(w)
    nw.discard(u)
    g.m -= 1
    if idx is not None:
        vc, ec = idx.vertex_count, idx.edge_count
        del ec[edge_key(u, w)]
        k = len(commons)
        vc[u] -= k
        vc[w] -= k
        for x in commons:
            vc[x] -= 1
            ec[edge_key(u, x)] -= 1
            ec[edge_key(w, x)] -= 1
    if log is not None:
        log.entries.append(("E", u, w, commons))
    return True


def undo(g: Graph, idx: Optional[TriangleIndex], log: UndoLog, checkpoint: Checkpoint) -> None:
    """Unwind ``log`` back to ``checkpoint``, restoring graph and counters exactly."""
    if checkpoint.owner is not log:
        raise ValueError("checkpoint was taken on a different undo log")
    if checkpoint.depth > len(log.entries):
        raise ValueError("checkpoint is newer than the log (already unwound?)")
    entries = log.entries
    adj = g.adj
    while len(entries) > checkpoint.depth:
        entry = entries.pop()
        if entry[0] == "V":
            _, v, nbrs, tris, incident = entry
            adj[v] = nbrs
            for w in nbrs:
                adj[w].add(v)
            g.m += len(nbrs)
            if idx is not None:
                vc, ec = idx.vertex_count, idx.edge_count
                vc[v] = len(tris)
                for w, c in incident.items():
                    ec[edge_key(v, w)] = c
                for pq in tris:
                    p, q = pq
                    vc[p] += 1
                    vc[q] += 1
                    ec[pq] += 1
        else:
            _, u, w, commons = entry
            adj[u].add(w)
            adj[w].add(u)
            g.m += 1
            if idx is not None:
                vc, ec = idx.vertex_count, idx.edge_count
                k = len(commons)
                ec[edge_key(u, w)] = k
                vc[u] += k
                vc[w] += k
                for x in commons:
                    vc[x] += 1
                    ec[edge_key(u, x)] += 1
                    ec[edge_key(w, x)] += 1


def two_neighborhood(g: Graph, v: int) -> Set[int]:
    """N2[v]: closed neighborhood plus every vertex sharing a neighbor with v."""
    adj = g.adj
    nbrs = adj[v]
    result = set(nbrs)
    result.add(v)
    for u in nbrs:
        result |= adj[u]
    return result


def compatible(g: Graph, u: int, w: int) -> bool:
    if u == w:
        return True
    nu = g.adj[u]
    return w in nu or not nu.isdisjoint(g.adj[w])


def common_neighbors(g: Graph, u: int, w: int) -> Set[int]:
    return g.adj[u] & g.adj[w]


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    keep = set(vertices)
    h = Graph()
    adj = g.adj
    h.adj = {v: adj[v] & keep for v in keep}
    h.m = sum(len(nbrs) for nbrs in h.adj.values()) // 2
    return h
