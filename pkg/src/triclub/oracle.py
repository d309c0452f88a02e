"""Brute-force reference for small graphs.

Deliberately self-contained: adjacency bitmasks, its own BFS, triangle counting
and edge peeling. Nothing here is shared with the solver, the reductions or the
bounds.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

DEFAULT_CAP = 16


class OracleRefused(ValueError):
    pass


def _masks(adjacency: Mapping[int, Iterable[int]]) -> Tuple[List[int], List[int]]:
    labels = sorted(adjacency)
    pos = {v: i for i, v in enumerate(labels)}
    masks = [0] * len(labels)
    for v, nbrs in adjacency.items():
        for w in nbrs:
            if w != v:
                masks[pos[v]] |= 1 << pos[w]
                masks[pos[w]] |= 1 << pos[v]
    return labels, masks


def _bits(mask: int) -> List[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _diameter_at_most_two(members: List[int], adj: List[int], subset: int) -> bool:
    # BFS truncated at depth 2 from every member, moving only inside the subset
    for v in members:
        seen = (1 << v) | (adj[v] & subset)
        frontier = adj[v] & subset
        for u in _bits(frontier):
            seen |= adj[u] & subset
        if seen != subset:
            return False
    return True


def _vertex_ok(members: List[int], adj: List[int], subset: int, ell: int) -> bool:
    for v in members:
        nv = adj[v] & subset
        # each triangle through v is counted twice among its neighbor pairs
        twice = sum(bin(adj[u] & nv).count("1") for u in _bits(nv))
        if twice // 2 < ell:
            return False
    return _diameter_at_most_two(members, adj, subset)


def _edge_ok(members: List[int], adj: List[int], subset: int, ell: int) -> bool:
    cur = {v: adj[v] & subset for v in members}
    changed = True
    while changed:
        changed = False
        doomed = []
        for v in members:
            for u in _bits(cur[v]):
                if u > v and bin(cur[v] & cur[u]).count("1") < ell:
                    doomed.append((v, u))
        for v, u in doomed:
            cur[v] &= ~(1 << u)
            cur[u] &= ~(1 << v)
            changed = True
    return _diameter_at_most_two(members, [cur.get(i, 0) for i in range(len(adj))], subset)


def is_triangle_two_club(
    adjacency: Mapping[int, Iterable[int]], S: Iterable[int], ell: int, variant: str
) -> bool:
    labels, adj = _masks(adjacency)
    pos = {v: i for i, v in enumerate(labels)}
    members = sorted(pos[v] for v in set(S))
    return _check(members, adj, ell, variant)


def _check(members: List[int], adj: List[int], ell: int, variant: str) -> bool:
    if not members:
        return True
    if len(members) == 1:
        return ell == 0
    subset = 0
    for v in members:
        subset |= 1 << v
    if variant == "edge":
        return _edge_ok(members, adj, subset, ell)
    return _vertex_ok(members, adj, subset, ell)


def _graph_triangles(adj: List[int], v: int) -> int:
    nv = adj[v]
    return sum(bin(adj[u] & nv).count("1") for u in _bits(nv)) // 2


def brute_force_constrained(
    adjacency: Mapping[int, Iterable[int]],
    ell: int,
    variant: str,
    must_contain: Iterable[int] = (),
    min_size: int = 0,
    cap: int = DEFAULT_CAP,
) -> Tuple[int, Optional[FrozenSet[int]]]:
    """Largest valid set that contains ``must_contain`` and has more than ``min_size`` vertices.

    Returns ``(0, None)`` when no such set exists. Subsets are tried by
    decreasing size and the search stops at the first feasible size.
    """
    variant = str(getattr(variant, "value", variant))
    if variant not in ("vertex", "edge"):
        raise ValueError(f"unknown variant {variant!r}")
    if len(adjacency) > cap:
        raise OracleRefused(f"{len(adjacency)} vertices exceeds the oracle cap of {cap}")
    labels, adj = _masks(adjacency)
    pos = {v: i for i, v in enumerate(labels)}
    required = sorted(pos[v] for v in set(must_contain))
    n = len(labels)
    # a vertex of a set with two or more members lies in at least ell triangles of G
    pool = [v for v in range(n) if v not in required and _graph_triangles(adj, v) >= ell]
    if ell > 0 and any(_graph_triangles(adj, v) < ell for v in required):
        return 0, None
    for size in range(n, min_size, -1):
        extra = size - len(required)
        if extra < 0 or extra > len(pool):
            continue
        for combo in combinations(pool, extra):
            members = sorted(required + list(combo))
            if _check(members, adj, ell, variant):
                return size, frozenset(labels[i] for i in members)
    return 0, None


def brute_force_opt(
    adjacency: Mapping[int, Iterable[int]],
    ell: int,
    variant: str,
    cap: int = DEFAULT_CAP,
) -> Tuple[int, FrozenSet[int]]:
    """Maximum triangle 2-club by exhaustive enumeration; the empty set when nothing else qualifies."""
    size, best = brute_force_constrained(adjacency, ell, variant, (), 0, cap)
    return (size, best) if best is not None else (0, frozenset())
