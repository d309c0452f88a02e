"""Conflict graphs: the pairs of vertices at distance more than two."""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple

from .graph import Graph, two_neighborhood

Edge = Tuple[int, int]


class ConflictGraph:
    """Incompatibility graph of a base graph, with its own undo stack.

    Deleting base vertices or edges can only create conflicts, so the log
    records added conflict edges and removed vertices; ``rollback`` pops them.
    """

    def __init__(self, vertices: Iterable[int] = ()):
        self.adj: Dict[int, Set[int]] = {v: set() for v in vertices}
        self.num_edges = 0
        self._log: List[tuple] = []

    def __contains__(self, v: object) -> bool:
        return v in self.adj

    def __len__(self) -> int:
        return len(self.adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> Iterator[Edge]:
        for u, nbrs in self.adj.items():
            for w in nbrs:
                if u < w:
                    yield (u, w)

    def edge_set(self) -> Set[Edge]:
        return set(self.edges())

    def add_conflict(self, u: int, w: int) -> bool:
        nu = self.adj[u]
        if w in nu:
            return False
        nu.add(w)
        self.adj[w].add(u)
        self.num_edges += 1
        self._log.append(("+", u, w))
        return True

    def remove_vertex(self, v: int) -> None:
        nbrs = self.adj.pop(v, None)
        if nbrs is None:
            return
        for w in nbrs:
            self.adj[w].discard(v)
        self.num_edges -= len(nbrs)
        self._log.append(("-", v, nbrs))

    def checkpoint(self) -> int:
        return len(self._log)

    def rollback(self, checkpoint: int) -> None:
        log = self._log
        adj = self.adj
        while len(log) > checkpoint:
            entry = log.pop()
            if entry[0] == "+":
                _, u, w = entry
                adj[u].discard(w)
                adj[w].discard(u)
                self.num_edges -= 1
            else:
                _, v, nbrs = entry
                adj[v] = nbrs
                for w in nbrs:
                    adj[w].add(v)
                self.num_edges += len(nbrs)

    def first_edge(self) -> Optional[Edge]:
        """Smallest conflict edge in (min id, max id) order."""
        if not self.num_edges:
            return None
        u = min(v for v, nbrs in self.adj.items() if nbrs)
        # the smallest vertex with a conflict only conflicts with larger ids
        return (u, min(self.adj[u]))


def build(g: Graph) -> ConflictGraph:
    """One depth-2 truncated BFS per vertex; everything outside N2[v] conflicts with v."""
    gc = ConflictGraph(g.adj)
    vertices = set(g.adj)
    adj = gc.adj
    for v in g.adj:
        far = vertices - two_neighborhood(g, v)
        adj[v] = far
    gc.num_edges = sum(len(nbrs) for nbrs in adj.values()) // 2
    return gc


def update_after_vertex_deletion(gc: ConflictGraph, g: Graph, w: int, neighbors_of_w_before: Iterable[int]) -> None:
    """Only pairs of former neighbors of ``w`` can lose their last short path."""
    gc.remove_vertex(w)
    adj = g.adj
    former = [x for x in neighbors_of_w_before if x in adj]
    if len(former) < 2:
        return
    for i, x in enumerate(former):
        nx_, cx = adj[x], gc.adj[x]
        for y in former[i + 1:]:
            if y not in nx_ and y not in cx and nx_.isdisjoint(adj[y]):
                gc.add_conflict(x, y)


def update_after_batch_deletion(gc: ConflictGraph, g: Graph, deleted: Iterable[int], former_neighbors: Iterable[int]) -> None:
    """Several vertices deleted at once: one BFS per surviving former neighbor.

    A pair that lost its last short path had a deleted common neighbor, so
    both of its endpoints are in ``former_neighbors``.
    """
    for w in deleted:
        gc.remove_vertex(w)
    adj = g.adj
    affected = {x for x in former_neighbors if x in adj}
    for x in sorted(affected):
        fresh = affected - two_neighborhood(g, x) - gc.adj[x]
        for y in sorted(fresh):
            if y > x:
                gc.add_conflict(x, y)


def update_after_edge_deletion(gc: ConflictGraph, g: Graph, x: int, y: int) -> None:
    """New conflicts all involve ``x`` or ``y``; one BFS from each endpoint."""
    for a, b in ((x, y), (y, x)):
        reach = two_neighborhood(g, a)
        ca = gc.adj[a]
        for z in g.adj[b]:
            if z not in reach and z not in ca:
                gc.add_conflict(a, z)
        if b not in reach and b not in ca:
            gc.add_conflict(a, b)


def greedy_maximal_matching(gc: ConflictGraph) -> List[Edge]:
    """Scan vertices by ascending id and match each with its smallest free partner."""
    matched: Set[int] = set()
    matching: List[Edge] = []
    for u in sorted(gc.adj):
        if u in matched:
            continue
        free = [w for w in gc.adj[u] if w not in matched]
        if free:
            w = min(free)
            matched.add(u)
            matched.add(w)
            matching.append((u, w) if u < w else (w, u))
    return matching


def maximum_matching(gc: ConflictGraph) -> List[Edge]:
    """Exact maximum-cardinality matching (networkx blossom algorithm)."""
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(gc.adj)
    h.add_edges_from(gc.edges())
    return sorted(tuple(sorted(e)) for e in nx.max_weight_matching(h, maxcardinality=True))
