"""Weighted undirected graph with pair-slot density algebra.

Densities here average over *all* vertex pairs of the relevant slot set,
not just the pairs that carry an actual edge: a missing edge counts as a
slot of weight zero.  Actual edges are the only thing stored; zero slots
are accounted for arithmetically.
"""

from __future__ import annotations

import math
from typing import AbstractSet, Iterable, Iterator

import numpy as np

# A vertex set is a plain set (or frozenset) of dense integer vertex ids.
VertexSet = AbstractSet[int]


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input; message names the line."""


class Graph:
    """Immutable weighted undirected simple graph.

    Vertices are dense ids 0..n-1; ``labels[i]`` is the original string
    label of vertex i, in first-appearance order.  ``adjacency[v]`` is a
    dict mapping each neighbor to the edge weight, symmetric by
    construction.
    Weights are finite and nonnegative; self-loops and duplicate edges
    are rejected at construction time.
    """

    __slots__ = ("labels", "label_index", "adjacency", "total_edge_count",
                 "_edge_arrays")

    def __init__(self, labels: list[str],
                 adjacency: list[dict[int, float]],
                 total_edge_count: int):
        self.labels = labels
        self.label_index = {lab: i for i, lab in enumerate(labels)}
        self.adjacency = adjacency
        self.total_edge_count = total_edge_count
        self._edge_arrays: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    def degree(self, v: int) -> int:
        """Number of actual incident edges (unweighted)."""
        return len(self.adjacency[v])

    def weighted_degree(self, v: int) -> float:
        return math.fsum(self.adjacency[v].values())

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield each actual edge once as (u, v, w) with u < v."""
        for u, nbrs in enumerate(self.adjacency):
            for v, w in nbrs.items():
                if u < v:
                    yield u, v, w

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return (u, v, w) numpy views of the edge list, u < v, memoized."""
        if self._edge_arrays is None:
            m = self.total_edge_count
            us = np.empty(m, dtype=np.int64)
            vs = np.empty(m, dtype=np.int64)
            ws = np.empty(m, dtype=np.float64)
            i = 0
            for u, v, w in self.edges():
                us[i] = u
                vs[i] = v
                ws[i] = w
                i += 1
            self._edge_arrays = (us, vs, ws)
        return self._edge_arrays

    @classmethod
    def from_edges(cls, labels: list[str],
                   edges: Iterable[tuple[int, int, float]],
                   _validated: bool = False) -> "Graph":
        """Build a graph from (u, v, weight) triples over existing ids.

        Triples may list each edge once in either orientation.  The same
        simplicity checks as the text loader apply unless ``_validated``
        is set by an internal caller that already guarantees them.
        """
        n = len(labels)
        if not _validated and len(set(labels)) != n:
            raise ValueError("vertex labels must be unique")
        adjacency: list[dict[int, float]] = [{} for _ in range(n)]
        count = 0
        for u, v, w in edges:
            if not _validated:
                if not (0 <= u < n and 0 <= v < n):
                    raise ValueError(f"edge ({u},{v}) references unknown vertex")
                if u == v:
                    raise ValueError(f"self-loop on vertex {labels[u]!r}")
                if w < 0 or not math.isfinite(w):
                    raise ValueError(f"bad weight {w!r} on edge ({labels[u]!r},{labels[v]!r})")
                if v in adjacency[u]:
                    raise ValueError(f"duplicate edge ({labels[u]!r},{labels[v]!r})")
            w = float(w)
            adjacency[u][v] = w
            adjacency[v][u] = w
            count += 1
        return cls(labels, adjacency, count)


def load_edge_list(lines: Iterable[str]) -> Graph:
    """Parse a whitespace-separated edge list into a Graph.

    Parameters
    ----------
    lines:
        Iterable of text lines (an open file works).  Each data line is
        ``u v`` or ``u v weight``; labels are arbitrary non-whitespace
        strings; weight defaults to 1.0.  Lines starting with ``#`` and
        blank lines are ignored.

    Returns
    -------
    Graph with vertices numbered in first-appearance order.

    Raises
    ------
    GraphFormatError
        On a self-loop, a duplicate edge (either orientation), a
        negative or non-finite weight, or an unparsable line.  The
        message names the offending 1-based line number.
    """
    labels: list[str] = []
    index: dict[str, int] = {}
    adjacency: list[dict[int, float]] = []
    count = 0

    def intern(label: str) -> int:
        i = index.get(label)
        if i is None:
            i = len(labels)
            index[label] = i
            labels.append(label)
            adjacency.append({})
        return i

    for line_num, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 2:
            a, b = parts
            w = 1.0
        elif len(parts) == 3:
            a, b = parts[0], parts[1]
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphFormatError(
                    f"line {line_num}: bad weight {parts[2]!r}") from None
        else:
            raise GraphFormatError(
                f"line {line_num}: expected 'u v' or 'u v weight', got {line!r}")
        if a == b:
            raise GraphFormatError(f"line {line_num}: self-loop on {a!r}")
        if not math.isfinite(w):
            raise GraphFormatError(f"line {line_num}: non-finite weight {w!r}")
        if w < 0:
            raise GraphFormatError(f"line {line_num}: negative weight {w!r}")
        u, v = intern(a), intern(b)
        if v in adjacency[u]:
            raise GraphFormatError(f"line {line_num}: duplicate edge ({a!r},{b!r})")
        adjacency[u][v] = w
        adjacency[v][u] = w
        count += 1

    return Graph(labels, adjacency, count)


def load_edge_list_path(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return load_edge_list(f)


def cross_pair_count(S: VertexSet, T: VertexSet) -> int:
    """Number of unordered pairs {x, y}, x != y, crossing S and T.

    Overlap is allowed: a pair with both endpoints in the intersection
    is still a single pair.  Closed form |S||T| - c(c+1)/2 with
    c = |S & T|.
    """
    c = len(S & T)
    return len(S) * len(T) - c * (c + 1) // 2


def cross_weight(g: Graph, S: VertexSet, T: VertexSet) -> float:
    """Total weight of actual edges crossing S and T, each pair once."""
    if len(T) < len(S):
        S, T = T, S
    total = 0.0
    for v in S:
        for u, w in g.adjacency[v].items():
            if u not in T:
                continue
            if v in T and u in S:
                # visible from both sides; count from the lower id only
                if v < u:
                    total += w
            else:
                total += w
    return total


def cross_density(g: Graph, S: VertexSet, T: VertexSet) -> float:
    """Mean slot weight over all pairs crossing S and T (zero slots count)."""
    pairs = cross_pair_count(S, T)
    if pairs == 0:
        raise ValueError("empty edge set has no density")
    return cross_weight(g, S, T) / pairs


def induced_weight(g: Graph, V: VertexSet) -> float:
    """Total weight of edges with both endpoints in V."""
    total = 0.0
    for v in V:
        for u, w in g.adjacency[v].items():
            if v < u and u in V:
                total += w
    return total


def induced_density(g: Graph, V: VertexSet) -> float:
    """Mean weight over all C(|V|,2) pair slots inside V."""
    n = len(V)
    if n < 2:
        raise ValueError("induced density needs at least 2 vertices")
    return induced_weight(g, V) / (n * (n - 1) // 2)


def avg_degree_density(g: Graph, V: VertexSet) -> float:
    """Induced edge weight divided by |V| (average-degree objective)."""
    if not V:
        raise ValueError("average-degree density of an empty set")
    return induced_weight(g, V) / len(V)
