"""Monotone segmentation of an ordered graph into nested communities.

The reduction: walking the order left to right, each vertex past the
source prefix contributes one weighted point, whose weight is the
number of pair slots back to all earlier vertices and whose value is
the mean weight of those slots.  Cutting the order into k segments and
scoring each segment's slot weights around their mean is then a
weighted least-squares segmentation of that point sequence, up to a
constant (the within-group variances).  Pooling adjacent violators
first makes the decreasing-mean constraint free, and a quadratic DP on
the pooled blocks picks the optimal k cuts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph_core import Graph
from .ordering import VertexOrder


class InfeasibleKError(ValueError):
    """Requested more segments than strictly decreasing means allow."""

    def __init__(self, k: int, max_feasible: int):
        super().__init__(
            f"k exceeds available monotone blocks: k={k}, max feasible k={max_feasible}")
        self.k = k
        self.max_feasible = max_feasible


class DensityMonotonicityError(RuntimeError):
    """Community densities failed to decrease strictly.

    Cannot happen with a single-vertex source; with a larger source the
    slots inside the source are excluded from the optimization and can
    drag a community's density out of line.
    """


@dataclass(frozen=True)
class GroupPoint:
    """Per-vertex summary of the slots back to all earlier vertices."""
    vertex: int
    pair_count: int
    density: float
    internal_sse: float


@dataclass(frozen=True)
class Block:
    """A pooled run of group points; span is half-open [start, end)."""
    start: int
    end: int
    weight: float
    mean: float
    sse: float


@dataclass(frozen=True)
class CommunitySequence:
    """k nested communities over an order: V_j = first breakpoints[j] vertices."""
    order: VertexOrder
    breakpoints: list[int]
    segment_centroids: list[float]
    segment_scores: list[float]
    community_densities: list[float]
    total_score: float

    @property
    def k(self) -> int:
        return len(self.breakpoints) - 1

    def community(self, j: int) -> list[int]:
        """Vertex ids of the j-th nested community (1-based), source included."""
        return list(self.order.sequence[:self.breakpoints[j]])

    def segment(self, j: int) -> list[int]:
        """Vertex ids added by the j-th community (1-based)."""
        return list(self.order.sequence[self.breakpoints[j - 1]:self.breakpoints[j]])


def _group_arrays(g: Graph, order: VertexOrder):
    """Vectorized slot statistics per order position past the source.

    Returns (a, x, internal, count, sumw) arrays indexed by position - s:
    a[i] is the slot count, x[i] the mean slot weight, internal[i] the
    within-group SSE, count[i] and sumw[i] the number and total weight
    of actual edges in the group.  Requires source_size >= 1.
    """
    n = g.num_vertices
    s = order.source_size
    pos = np.empty(n, dtype=np.int64)
    pos[np.asarray(order.sequence, dtype=np.int64)] = np.arange(n)
    us, vs, ws = g.edge_arrays()
    later = np.maximum(pos[us], pos[vs]) if len(us) else np.empty(0, dtype=np.int64)
    # each edge belongs to the group of its later endpoint; edges fully
    # inside the source prefix belong to no group
    mask = later >= s
    lat = later[mask] - s
    w_m = ws[mask]
    sumw = np.bincount(lat, weights=w_m, minlength=n - s)
    count = np.bincount(lat, minlength=n - s)
    a = np.arange(s, n, dtype=np.int64)
    x = sumw / a
    # nonnegative-term SSE: actual slots around the mean, then zero slots
    dev = np.bincount(lat, weights=(w_m - x[lat]) ** 2, minlength=n - s)
    internal = dev + (a - count) * x * x
    return a, x, internal, count, sumw


def build_group_sequence(g: Graph, order: VertexOrder) -> list[GroupPoint]:
    """One weighted point per vertex after the source prefix.

    For the vertex at (1-based) position i > |S|: pair_count = i - 1,
    density = total edge weight back to earlier vertices / (i - 1), and
    internal_sse = sum over those i - 1 slots of (slot weight - density)
    squared, missing edges counting as zero-weight slots.
    """
    if order.source_size < 1:
        raise ValueError("order must carry a non-empty source prefix")
    a, x, internal, _, _ = _group_arrays(g, order)
    seq = order.sequence
    s = order.source_size
    return [GroupPoint(vertex=seq[s + i], pair_count=int(a[i]),
                       density=float(x[i]), internal_sse=float(internal[i]))
            for i in range(len(a))]


def pav_pool(points: Iterable[tuple[float, float]]) -> list[Block]:
    """Pool adjacent violators of a strictly-decreasing-means fit.

    Parameters
    ----------
    points:
        (weight, value) pairs, weights positive, in sequence order.

    Returns
    -------
    Blocks tiling the input, each with the weighted mean of its span;
    means are strictly decreasing (equal-mean neighbors are merged).
    Among all non-increasing fits, the block means minimize the
    weighted sum of squared deviations; total weight and total
    weight*mean are conserved (exactly so when the inputs are exactly
    representable, to rounding otherwise).  Linear time.
    """
    # stack rows: [start, end, weight, weighted_sum, sse]
    stack: list[list[float]] = []
    for i, (w, v) in enumerate(points):
        if w <= 0:
            raise ValueError(f"point {i}: weight must be positive, got {w}")
        stack.append([i, i + 1, float(w), float(w) * float(v), 0.0])
        while len(stack) >= 2 and (stack[-2][3] * stack[-1][2]
                                   <= stack[-1][3] * stack[-2][2]):
            # previous mean <= current mean: merge (compare via cross-products
            # to avoid the division; weights are positive)
            s2 = stack.pop()
            s1 = stack[-1]
            w1, w2 = s1[2], s2[2]
            m1, m2 = s1[3] / w1, s2[3] / w2
            s1[1] = s2[1]
            s1[2] = w1 + w2
            s1[3] = s1[3] + s2[3]
            s1[4] = s1[4] + s2[4] + (w1 * w2 / (w1 + w2)) * (m1 - m2) ** 2
    return [Block(start=int(r[0]), end=int(r[1]), weight=r[2],
                  mean=r[3] / r[2], sse=r[4]) for r in stack]


def segment_dp(blocks: Sequence[Block], k: int) -> tuple[list[int], float]:
    """Optimal k-segmentation of pooled blocks by weighted SSE.

    Minimizes, over all ways to cut the block sequence into k contiguous
    segments, the sum over segments of the weighted squared deviation of
    block means around the segment's weighted centroid.  Returns the
    k+1 cut positions in block indices (0 and len(blocks) included) and
    the optimal cost.  Segment costs come from prefix sums in O(1);
    overall O(N^2 k).  Cost ties resolve to the smallest predecessor
    index at every table cell, so the result is deterministic.
    """
    n = len(blocks)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise InfeasibleKError(k, n)
    A = np.array([b.weight for b in blocks])
    M = np.array([b.mean for b in blocks])
    pa = np.concatenate([[0.0], np.cumsum(A)])
    pax = np.concatenate([[0.0], np.cumsum(A * M)])
    pax2 = np.concatenate([[0.0], np.cumsum(A * M * M)])

    def span_cost(i: np.ndarray, j: int) -> np.ndarray:
        # SSE of blocks[i:j] around their weighted centroid, vectorized in i
        w = pa[j] - pa[i]
        sx = pax[j] - pax[i]
        sq = pax2[j] - pax2[i]
        return np.maximum(sq - sx * sx / w, 0.0)

    idx = np.arange(n + 1)
    best = np.full((k + 1, n + 1), np.inf)
    back = np.zeros((k + 1, n + 1), dtype=np.int64)
    best[0, 0] = 0.0
    for ell in range(1, k + 1):
        for j in range(ell, n - (k - ell) + 1):
            lo = ell - 1
            cand = best[ell - 1, lo:j] + span_cost(idx[lo:j], j)
            t = int(np.argmin(cand))
            best[ell, j] = cand[t]
            back[ell, j] = lo + t

    cuts = [n]
    for ell in range(k, 0, -1):
        cuts.append(int(back[ell, cuts[-1]]))
    cuts.reverse()
    return cuts, float(best[k, n])


def discover(g: Graph, order: VertexOrder, k: int) -> CommunitySequence:
    """Optimal k nested communities of strictly decreasing density.

    Pipeline: group reduction, violator pooling, k-segmentation DP.
    total_score is the full objective: the DP cost plus the pooled
    within-block SSE plus the within-group variances, identical to
    scoring the resulting breakpoints directly from the graph.

    Raises InfeasibleKError when fewer than k pooled blocks exist, and
    DensityMonotonicityError if the community densities fail to
    decrease strictly (possible only for sources of 2+ vertices).
    """
    s = order.source_size
    n = g.num_vertices
    if s < 1:
        raise ValueError("order must carry a non-empty source prefix")
    if n - s < 1:
        raise ValueError("source covers every vertex; nothing to segment")
    a, x, internal, _, _ = _group_arrays(g, order)
    blocks = pav_pool(zip(a.tolist(), x.tolist()))
    cuts, dp_cost = segment_dp(blocks, k)

    block_w = np.array([b.weight for b in blocks])
    block_m = np.array([b.mean for b in blocks])
    block_sse = np.array([b.sse for b in blocks])
    point_end = np.array([b.end for b in blocks], dtype=np.int64)
    internal_cum = np.concatenate([[0.0], np.cumsum(internal)])

    breakpoints = [s] + [s + int(point_end[t - 1]) for t in cuts[1:]]
    centroids: list[float] = []
    seg_scores: list[float] = []
    for j in range(k):
        b0, b1 = cuts[j], cuts[j + 1]
        w = float(block_w[b0:b1].sum())
        mu = float((block_w[b0:b1] * block_m[b0:b1]).sum() / w)
        pooled = float(block_sse[b0:b1].sum()
                       + (block_w[b0:b1] * (block_m[b0:b1] - mu) ** 2).sum())
        p0 = int(point_end[b0 - 1]) if b0 > 0 else 0
        p1 = int(point_end[b1 - 1])
        seg_scores.append(pooled + float(internal_cum[p1] - internal_cum[p0]))
        centroids.append(mu)

    for j in range(1, k):
        if not centroids[j] < centroids[j - 1]:
            raise AssertionError("segment centroids not strictly decreasing")

    src = set(order.sequence[:s])
    source_w = 0.0
    for v in src:
        for u, w in g.adjacency[v].items():
            if v < u and u in src:
                source_w += w
    cum_w = source_w
    densities: list[float] = []
    for j in range(k):
        b0, b1 = cuts[j], cuts[j + 1]
        cum_w += float((block_w[b0:b1] * block_m[b0:b1]).sum())
        t = breakpoints[j + 1]
        densities.append(cum_w / (t * (t - 1) // 2))
    for j in range(1, k):
        if not densities[j] < densities[j - 1]:
            raise DensityMonotonicityError(
                f"community densities not strictly decreasing at community {j + 1}: "
                f"{densities[j - 1]} then {densities[j]}")

    return CommunitySequence(order=order, breakpoints=breakpoints,
                             segment_centroids=centroids,
                             segment_scores=seg_scores,
                             community_densities=densities,
                             total_score=float(sum(seg_scores)))


def score_sequence(g: Graph, order: VertexOrder,
                   breakpoints: Sequence[int]) -> tuple[float, list[float], list[float]]:
    """Score arbitrary breakpoints directly from the graph.

    For each segment j, the slot set is every pair inside the first
    breakpoints[j] vertices that is not inside the first
    breakpoints[j-1]; the segment score is the squared deviation of
    those slot weights (missing edges are zero) around their mean.
    Returns (total score, per-segment means, per-community densities).
    No monotonicity is required of the input, so baseline sequences can
    be scored too.
    """
    s = order.source_size
    n = g.num_vertices
    bps = list(breakpoints)
    if len(bps) < 2 or bps[0] != s or bps[-1] != n:
        raise ValueError(
            f"breakpoints must run from the source size {s} to {n}, got {bps}")
    if any(b1 <= b0 for b0, b1 in zip(bps, bps[1:])):
        raise ValueError(f"breakpoints must be strictly ascending, got {bps}")
    if s < 1:
        raise ValueError("order must carry a non-empty source prefix")
    k = len(bps) - 1

    pos = np.empty(n, dtype=np.int64)
    pos[np.asarray(order.sequence, dtype=np.int64)] = np.arange(n)
    us, vs, ws = g.edge_arrays()
    later = np.maximum(pos[us], pos[vs]) if len(us) else np.empty(0, dtype=np.int64)
    inside_src = later < s
    source_w = float(ws[inside_src].sum()) if len(us) else 0.0
    seg = np.searchsorted(np.asarray(bps[1:], dtype=np.int64), later, side="right")

    live = ~inside_src
    seg_live = seg[live]
    w_live = ws[live]
    sumw = np.bincount(seg_live, weights=w_live, minlength=k)
    cnt = np.bincount(seg_live, minlength=k)
    pairs = np.array([b * (b - 1) // 2 for b in bps], dtype=np.float64)
    slots = pairs[1:] - pairs[:-1]
    mu = sumw / slots
    dev = np.bincount(seg_live, weights=(w_live - mu[seg_live]) ** 2, minlength=k)
    seg_score = dev + (slots - cnt) * mu * mu

    cum_w = source_w + np.cumsum(sumw)
    densities = cum_w / pairs[1:]
    return float(seg_score.sum()), [float(v) for v in mu], [float(v) for v in densities]
