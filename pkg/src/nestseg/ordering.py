"""Vertex orders: min-weighted-degree peeling and baseline orders."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

from .graph_core import Graph, VertexSet


@dataclass(frozen=True)
class VertexOrder:
    """A permutation of vertex ids whose first source_size entries are
    the source set (ascending id)."""
    sequence: list[int]
    source_size: int

    def __post_init__(self):
        n = len(self.sequence)
        if sorted(self.sequence) != list(range(n)):
            raise ValueError("sequence is not a permutation of 0..n-1")
        if not (0 <= self.source_size <= n):
            raise ValueError("source_size out of range")

    def positions(self) -> list[int]:
        """positions()[v] = index of vertex v in the sequence."""
        pos = [0] * len(self.sequence)
        for i, v in enumerate(self.sequence):
            pos[v] = i
        return pos

    def source(self) -> frozenset[int]:
        return frozenset(self.sequence[:self.source_size])


def sort_vertices(g: Graph, S: VertexSet) -> VertexOrder:
    """Order vertices by repeatedly peeling the lightest one.

    Starting from the full vertex set, repeatedly remove the non-source
    vertex with the smallest total weight of edges to the vertices still
    present (ties: lowest id), and prepend it to the order.  The source
    set, in ascending id order, forms the head of the result; the first
    vertex peeled ends up last.

    Binary heap with lazy deletion; O((n + m) log n).
    """
    n = g.num_vertices
    src = sorted(S)
    in_source = bytearray(n)
    for v in src:
        in_source[v] = 1

    wdeg = [0.0] * n
    for v in range(n):
        if not in_source[v]:
            wdeg[v] = sum(g.adjacency[v].values())

    heap = [(wdeg[v], v) for v in range(n) if not in_source[v]]
    heapq.heapify(heap)
    present = bytearray([1]) * n
    adjacency = g.adjacency
    push = heapq.heappush
    pop = heapq.heappop

    removed: list[int] = []
    remaining = n - len(src)
    while remaining:
        d, x = pop(heap)
        if not present[x] or d != wdeg[x]:
            continue  # stale entry
        present[x] = 0
        removed.append(x)
        remaining -= 1
        for y, w in adjacency[x].items():
            if present[y] and not in_source[y]:
                wdeg[y] -= w
                push(heap, (wdeg[y], y))

    removed.reverse()
    return VertexOrder(sequence=src + removed, source_size=len(src))


def densest_prefix(g: Graph, order: VertexOrder) -> tuple[frozenset[int], float]:
    """Best prefix of the order under the average-degree objective.

    Scans all prefixes {v_1..v_i}, i >= 1, and returns the first one
    maximizing induced edge weight / vertex count, with that value.
    """
    pos = order.positions()
    cum_weight = 0.0
    best_i = 1
    best_density = 0.0
    first = True
    for i, v in enumerate(order.sequence):
        for u, w in g.adjacency[v].items():
            if pos[u] < i:
                cum_weight += w
        density = cum_weight / (i + 1)
        if first or density > best_density:
            best_density = density
            best_i = i + 1
            first = False
    return frozenset(order.sequence[:best_i]), best_density


def hops_levels(g: Graph, S: VertexSet) -> list[set[int]]:
    """BFS distance classes from the source set.

    Level 0 is S itself; unreachable vertices, if any, form one final
    level so the union of levels is always the whole vertex set.
    """
    if not S:
        raise ValueError("source set must not be empty")
    dist = {v: 0 for v in S}
    frontier = deque(sorted(S))
    levels: list[set[int]] = [set(S)]
    while frontier:
        next_frontier: deque[int] = deque()
        current = set()
        for v in frontier:
            for u in g.adjacency[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    current.add(u)
                    next_frontier.append(u)
        if current:
            levels.append(current)
        frontier = next_frontier
    unreachable = set(range(g.num_vertices)) - dist.keys()
    if unreachable:
        levels.append(unreachable)
    return levels


def _ranked_order(g: Graph, S: VertexSet, score) -> VertexOrder:
    src = sorted(S)
    rest = [v for v in range(g.num_vertices) if v not in S]
    rest.sort(key=lambda v: (-score(v), v))
    return VertexOrder(sequence=src + rest, source_size=len(src))


def degree_order(g: Graph, S: VertexSet) -> VertexOrder:
    """Source first, then descending weighted degree, ties by id."""
    wdeg = [g.weighted_degree(v) for v in range(g.num_vertices)]
    return _ranked_order(g, S, lambda v: wdeg[v])


def pagerank_order(g: Graph, S: VertexSet, pr) -> VertexOrder:
    """Source first, then descending walk score, ties by id."""
    return _ranked_order(g, S, lambda v: float(pr.p[v]))
