"""Brute-force reference solvers and property validators.

Everything here is exhaustive or sampled verification machinery for
small instances: independent re-implementations of the optimization
objectives by enumeration, used to pin down the fast algorithms in
tests and in the `verify` CLI subcommand.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph_core import (Graph, VertexSet, avg_degree_density, cross_density,
                         cross_pair_count)
from .ordering import VertexOrder


def random_graph(rng: random.Random, n: int, edge_prob: float,
                 weighted: bool = False, connected: bool = False) -> Graph:
    """Random test graph with integer labels "0".."n-1".

    Each pair becomes an edge with probability edge_prob; weights are
    dyadic rationals in (0, 4] when weighted, else 1.  With connected=
    True a random spanning tree is added first so every vertex is
    reachable.
    """
    edges: dict[tuple[int, int], float] = {}

    def w() -> float:
        return rng.randint(1, 16) / 4.0 if weighted else 1.0

    if connected and n > 1:
        verts = list(range(n))
        rng.shuffle(verts)
        for i in range(1, n):
            u = verts[rng.randrange(i)]
            v = verts[i]
            edges[(min(u, v), max(u, v))] = w()
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < edge_prob:
                edges[(u, v)] = w()
    labels = [str(i) for i in range(n)]
    return Graph.from_edges(labels, [(u, v, wt) for (u, v), wt in edges.items()])


@dataclass(frozen=True)
class OracleBudget:
    """Hard caps on exhaustive enumeration sizes."""
    max_vertices: int = 8
    max_blocks: int = 12
    max_k: int = 4
    sample_count: int = 50


DEFAULT_BUDGET = OracleBudget()


def _require(cond: bool, what: str):
    if not cond:
        raise ValueError(f"oracle budget exceeded: {what}")


def _weighted_centroid(points: Sequence[tuple[float, float]]) -> float:
    w = sum(p[0] for p in points)
    return sum(p[0] * p[1] for p in points) / w


def _weighted_sse(points: Sequence[tuple[float, float]], mu: float) -> float:
    return sum(w * (v - mu) ** 2 for w, v in points)


def brute_force_segmentation(points: Sequence[tuple[float, float]], k: int,
                             budget: OracleBudget = DEFAULT_BUDGET
                             ) -> tuple[list[int] | None, float]:
    """Exhaustive best k-segmentation with strictly decreasing centroids.

    Enumerates every way to cut the weighted points into k contiguous
    segments, keeps those whose segment centroids strictly decrease,
    and returns (cut positions, cost) minimizing the summed weighted
    SSE around segment centroids.  Returns (None, inf) when no cut
    qualifies.  Ties: lexicographically smallest cut vector.
    """
    n = len(points)
    _require(n <= budget.max_blocks, f"{n} points > {budget.max_blocks}")
    _require(k <= budget.max_k, f"k={k} > {budget.max_k}")
    if not 1 <= k <= n:
        return None, math.inf
    best_cuts: list[int] | None = None
    best_cost = math.inf
    for inner in itertools.combinations(range(1, n), k - 1):
        cuts = (0,) + inner + (n,)
        cost = 0.0
        prev_mu = math.inf
        ok = True
        for a, b in zip(cuts, cuts[1:]):
            seg = points[a:b]
            mu = _weighted_centroid(seg)
            if not mu < prev_mu:
                ok = False
                break
            cost += _weighted_sse(seg, mu)
            prev_mu = mu
        if ok and cost < best_cost:
            best_cost = cost
            best_cuts = list(cuts)
    return best_cuts, best_cost


def brute_force_antitonic_fit(points: Sequence[tuple[float, float]],
                              budget: OracleBudget = DEFAULT_BUDGET
                              ) -> tuple[list[float], float]:
    """Exhaustive best non-increasing pooled fit of weighted points.

    Tries every partition into consecutive runs, pools each run to its
    weighted mean, keeps partitions with non-increasing pooled means,
    and returns the per-point fitted values and SSE of the best one.
    """
    n = len(points)
    _require(n <= budget.max_blocks, f"{n} points > {budget.max_blocks}")
    best_fit: list[float] | None = None
    best_sse = math.inf
    for mask in range(1 << (n - 1)):
        cuts = [0] + [i + 1 for i in range(n - 1) if mask >> i & 1] + [n]
        means = []
        sse = 0.0
        for a, b in zip(cuts, cuts[1:]):
            mu = _weighted_centroid(points[a:b])
            means.append((mu, b - a))
            sse += _weighted_sse(points[a:b], mu)
        if any(means[i][0] < means[i + 1][0] for i in range(len(means) - 1)):
            continue
        if sse < best_sse:
            best_sse = sse
            best_fit = [mu for mu, width in means for _ in range(width)]
    assert best_fit is not None  # the single-run partition always qualifies
    return best_fit, best_sse


def _pair_weights(g: Graph) -> dict[tuple[int, int], float]:
    return {(u, v): w for u, v, w in g.edges()}


def _chain_score(g: Graph, chain: Sequence[frozenset[int]]) -> float:
    """Definition-style score: per step, SSE of the new pair slots."""
    wdict = _pair_weights(g)
    total = 0.0
    for prev, cur in zip(chain, chain[1:]):
        slots = [tuple(sorted(p)) for p in itertools.combinations(sorted(cur), 2)
                 if not (p[0] in prev and p[1] in prev)]
        weights = [wdict.get(p, 0.0) for p in slots]
        mu = sum(weights) / len(slots)
        total += sum((w - mu) ** 2 for w in weights)
    return total


def _induced_density_mask(wdict, members: tuple[int, ...]) -> float:
    m = len(members)
    w = sum(wdict.get(tuple(sorted(p)), 0.0)
            for p in itertools.combinations(members, 2))
    return w / (m * (m - 1) // 2)


def brute_force_nested(g: Graph, S: VertexSet, k: int,
                       budget: OracleBudget = DEFAULT_BUDGET
                       ) -> tuple[list[frozenset[int]] | None, float]:
    """Exhaustive best nested chain with strictly decreasing densities.

    Enumerates all chains S = V_0 < V_1 < ... < V_k = V (proper
    inclusions) whose densities d(V_1) > ... > d(V_k) strictly
    decrease, and returns the chain minimizing the summed per-step slot
    SSE, with the score.  (None, inf) when no chain is feasible.
    Ties: lexicographically smallest tuple of membership bitmasks.
    """
    n = g.num_vertices
    _require(n <= budget.max_vertices, f"{n} vertices > {budget.max_vertices}")
    _require(k <= budget.max_k, f"k={k} > {budget.max_k}")
    wdict = _pair_weights(g)
    s_mask = 0
    for v in S:
        s_mask |= 1 << v
    full = (1 << n) - 1
    if k < 1 or s_mask == full:
        return None, math.inf

    def members(mask: int) -> tuple[int, ...]:
        return tuple(v for v in range(n) if mask >> v & 1)

    best_chain: list[int] | None = None
    best_score = math.inf

    def recurse(chain: list[int]):
        nonlocal best_chain, best_score
        depth = len(chain) - 1
        cur = chain[-1]
        if depth == k - 1:
            candidates = [full] if full != cur else []
        else:
            rem = full & ~cur
            masks = []
            m = rem
            while True:
                if m:
                    masks.append(cur | m)
                if m == 0:
                    break
                m = (m - 1) & rem
            # proper additions that still leave room for the tail
            candidates = sorted(c for c in masks if c != full)
        for nxt in candidates:
            chain.append(nxt)
            if depth + 1 == k:
                sets = [frozenset(members(m)) for m in chain]
                dens = [_induced_density_mask(wdict, members(m)) for m in chain[1:]]
                if all(a > b for a, b in zip(dens, dens[1:])):
                    score = _chain_score(g, sets)
                    if score < best_score or (score == best_score
                                              and best_chain is not None
                                              and chain < best_chain):
                        best_score = score
                        best_chain = list(chain)
            else:
                recurse(chain)
            chain.pop()

    recurse([s_mask])
    if best_chain is None:
        return None, math.inf
    return [frozenset(members(m)) for m in best_chain], best_score


def check_prop_density(g: Graph, S: VertexSet, k: int,
                       tol: float = 1e-12,
                       budget: OracleBudget = DEFAULT_BUDGET) -> dict:
    """At the exhaustive optimum, any attachable set is no denser than
    any removable set.

    For each interior community V_i of the optimal chain, every
    nonempty X inside V_{i+1} \\ V_i and Y inside V_i \\ V_{i-1} must
    satisfy d(X, X | V_i) <= d(Y, V_i) + tol.  Returns a report dict.
    """
    chain, score = brute_force_nested(g, S, k, budget)
    if chain is None:
        return {"feasible": False, "checked": 0, "violations": 0}
    checked = 0
    violations = []
    for i in range(1, k):
        Vi = chain[i]
        outer = sorted(chain[i + 1] - Vi)
        inner = sorted(Vi - chain[i - 1])
        for rx in range(1, len(outer) + 1):
            for X in itertools.combinations(outer, rx):
                lhs = cross_density(g, set(X), set(X) | Vi)
                for ry in range(1, len(inner) + 1):
                    for Y in itertools.combinations(inner, ry):
                        rhs = cross_density(g, set(Y), Vi)
                        checked += 1
                        if lhs > rhs + tol:
                            violations.append((i, X, Y, lhs, rhs))
    return {"feasible": True, "score": score, "checked": checked,
            "violations": len(violations), "examples": violations[:5]}


def brute_force_densest_subgraph(g: Graph,
                                 budget: OracleBudget = DEFAULT_BUDGET
                                 ) -> tuple[frozenset[int], float]:
    """Exhaustive maximizer of induced weight / vertex count."""
    n = g.num_vertices
    _require(n <= 10, f"{n} vertices > 10")
    best_mask, best = 0, -math.inf
    for mask in range(1, 1 << n):
        sub = {v for v in range(n) if mask >> v & 1}
        d = avg_degree_density(g, sub)
        if d > best:
            best, best_mask = d, mask
    return frozenset(v for v in range(n) if best_mask >> v & 1), best


def brute_force_dense_superset(g: Graph, S: VertexSet,
                               budget: OracleBudget = DEFAULT_BUDGET
                               ) -> tuple[frozenset[int], float]:
    """Exhaustive maximizer of d(T, S | T) over nonempty T."""
    n = g.num_vertices
    _require(n <= 10, f"{n} vertices > 10")
    best_mask, best = 0, -math.inf
    for mask in range(1, 1 << n):
        T = {v for v in range(n) if mask >> v & 1}
        union = set(S) | T
        if cross_pair_count(T, union) == 0:
            continue  # single shared vertex: no pair slots
        d = cross_density(g, T, union)
        if d > best:
            best, best_mask = d, mask
    return frozenset(v for v in range(n) if best_mask >> v & 1), best


def brute_force_sparse_nbhd(g: Graph,
                            budget: OracleBudget = DEFAULT_BUDGET
                            ) -> tuple[frozenset[int], float]:
    """Exhaustive minimizer of d(T, V) over nonempty T."""
    n = g.num_vertices
    _require(n <= 10, f"{n} vertices > 10")
    V = set(range(n))
    best_mask, best = 0, math.inf
    for mask in range(1, 1 << n):
        T = {v for v in range(n) if mask >> v & 1}
        if cross_pair_count(T, V) == 0:
            continue
        d = cross_density(g, T, V)
        if d < best:
            best, best_mask = d, mask
    return frozenset(v for v in range(n) if best_mask >> v & 1), best


def _weight_matrix(g: Graph) -> np.ndarray:
    n = g.num_vertices
    W = np.zeros((n, n))
    for u, v, w in g.edges():
        W[u, v] = W[v, u] = w
    return W


def _subset_sums(values: np.ndarray) -> np.ndarray:
    """sums[mask] = sum of values[b] over set bits b of mask."""
    t = len(values)
    arr = np.zeros(1 << t)
    for b in range(t):
        view = arr.reshape(-1, 2, 1 << b)
        view[:, 1, :] += values[b]
    return arr


def _internal_weights(Wmat: np.ndarray, verts: Sequence[int]) -> np.ndarray:
    """wE[mask] = total weight of edges with both endpoints in the mask."""
    t = len(verts)
    masks = np.arange(1 << t)
    arr = np.zeros(1 << t)
    for i in range(t):
        for j in range(i + 1, t):
            w = Wmat[verts[i], verts[j]]
            if w:
                me = (1 << i) | (1 << j)
                arr[(masks & me) == me] += w
    return arr


def _popcounts(t: int) -> np.ndarray:
    masks = np.arange(1 << t, dtype=np.uint64)
    counts = np.zeros(1 << t, dtype=np.int64)
    while masks.any():
        counts += (masks & 1).astype(np.int64)
        masks >>= 1
    return counts


def check_peel_lower_bound(g: Graph, order: VertexOrder,
                           tol: float = 1e-12) -> dict:
    """Exhaustive check: every subset of every peel prefix has density
    to that prefix at least half the last vertex's density to it.

    For each prefix W of the order (length >= 2, past the source) with
    last vertex v, and every nonempty X inside W: d(X, W) >= d(v, W)/2
    minus tol.  Exhaustive over subsets; intended for n <= 12.
    """
    n = g.num_vertices
    _require(n <= 12, f"{n} vertices > 12 for exhaustive subset check")
    Wmat = _weight_matrix(g)
    seq = order.sequence
    s = order.source_size
    checked = 0
    violations = 0
    worst = math.inf  # min of d(X,W) - f/2 over everything
    for c in range(max(1, s), n):  # prefix = positions 0..c; last vertex peeled
        verts = seq[:c + 1]
        cands = seq[s:c + 1]  # X draws from non-source vertices only
        t = len(cands)
        wW = np.array([Wmat[v, verts].sum() for v in cands])
        f = wW[-1] / c  # d(seq[c], prefix): c pair slots
        sums = _subset_sums(wW)
        wE = _internal_weights(Wmat, cands)
        size = _popcounts(t)
        masks = np.arange(1 << t)
        nonempty = masks > 0
        num = sums[nonempty] - wE[nonempty]
        sz = size[nonempty].astype(np.float64)
        den = sz * (c + 1) - sz * (sz + 1) / 2.0
        d = num / den
        checked += int(nonempty.sum())
        margin = d - f / 2.0
        worst = min(worst, float(margin.min()))
        violations += int((margin < -tol).sum())
    return {"prefixes": n - max(1, s), "checked": checked,
            "violations": violations, "worst_margin": worst}


def check_peel_upper_bound(g: Graph, order: VertexOrder,
                           tol: float = 1e-12) -> dict:
    """Exhaustive check of the stretch-factor upper bound on the peel order.

    For positions b < its window end c (1-based, b >= 2): W is the
    prefix before b, U the window of positions b..c, f = d(v_b, W), and
    alpha the largest ratio w(v, U)/w(v, W) over v in U.  Every
    nonempty X inside U must satisfy d(X, X | W) <= (1+alpha)^2 f + tol.
    Windows containing a vertex with w(v, W) = 0 < w(v, U) are skipped
    and counted.  Exhaustive over subsets; intended for n <= 12.
    """
    n = g.num_vertices
    _require(n <= 12, f"{n} vertices > 12 for exhaustive subset check")
    Wmat = _weight_matrix(g)
    seq = order.sequence
    s = order.source_size
    checked = 0
    violations = 0
    skipped = 0
    pairs = 0
    for b in range(max(1, s), n):  # window start position; |W| = b >= 1
        Wverts = seq[:b]
        Uall = seq[b:]
        t = len(Uall)
        wW = np.array([Wmat[v, Wverts].sum() for v in Uall])
        f = wW[0] / b
        sums = _subset_sums(wW)
        wE_U = _internal_weights(Wmat, Uall)
        size = _popcounts(t)
        all_masks = np.arange(1 << t)
        # incremental per window end: vertex Uall[j] arrives at c = b + j
        wU = np.zeros(t)  # w(v, window) for v in current window
        for j in range(t):
            for i in range(j):
                w = Wmat[Uall[i], Uall[j]]
                if w:
                    wU[i] += w
                    wU[j] += w
            pairs += 1
            window = slice(0, j + 1)
            bad = (wW[window] == 0) & (wU[window] > 0)
            if bad.any():
                skipped += 1
                continue
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(wW[window] > 0, wU[window] / np.where(wW[window] > 0, wW[window], 1.0), 0.0)
            alpha = float(ratios.max())
            bound = (1.0 + alpha) ** 2 * f
            # only masks whose highest set bit is j are new to this window
            new = all_masks[(all_masks >> j) == 1]
            num = sums[new] + wE_U[new]
            sz = size[new].astype(np.float64)
            den = sz * (sz + b) - sz * (sz + 1) / 2.0
            d = num / den
            checked += len(new)
            violations += int((d > bound + tol).sum())
    return {"windows": pairs, "skipped": skipped, "checked": checked,
            "violations": violations}


def sample_peel_bounds(g: Graph, order: VertexOrder, rng,
                       samples: int = 50, tol: float = 1e-12) -> dict:
    """Sampled version of both peel-order bounds for larger graphs.

    Draws random (window, subset) instances and checks the half lower
    bound and the stretch-factor upper bound directly.  rng is a
    random.Random.
    """
    n = g.num_vertices
    Wmat = _weight_matrix(g)
    seq = order.sequence
    lower_viol = 0
    upper_viol = 0
    skipped = 0
    for _ in range(samples):
        # lower bound: prefix end c >= 1, random nonempty X within it
        c = rng.randrange(1, n)
        verts = seq[:c + 1]
        X = [v for v in verts if rng.random() < 0.5] or [rng.choice(verts)]
        wW = {v: Wmat[v, verts].sum() for v in verts}
        f = wW[verts[-1]] / c
        num = sum(wW[v] for v in X) - sum(
            Wmat[a, b] for a, b in itertools.combinations(X, 2))
        sz = len(X)
        den = sz * (c + 1) - sz * (sz + 1) // 2
        if num / den < f / 2.0 - tol:
            lower_viol += 1

        # upper bound: window start b >= 1, end c, random nonempty X
        b = rng.randrange(1, n)
        c = rng.randrange(b, n)
        Wverts = seq[:b]
        U = seq[b:c + 1]
        wWv = {v: Wmat[v, Wverts].sum() for v in U}
        wUv = {v: Wmat[v, U].sum() for v in U}
        if any(wWv[v] == 0 and wUv[v] > 0 for v in U):
            skipped += 1
            continue
        alpha = max((wUv[v] / wWv[v] if wWv[v] > 0 else 0.0) for v in U)
        f = wWv[U[0]] / b
        X = [v for v in U if rng.random() < 0.5] or [rng.choice(U)]
        num = sum(wWv[v] for v in X) + sum(
            Wmat[a, bb] for a, bb in itertools.combinations(X, 2))
        sz = len(X)
        den = sz * (sz + b) - sz * (sz + 1) // 2
        if num / den > (1.0 + alpha) ** 2 * f + tol:
            upper_viol += 1
    return {"samples": samples, "skipped": skipped,
            "lower_violations": lower_viol, "upper_violations": upper_viol}
