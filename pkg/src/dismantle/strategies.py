"""Baseline attack strategies.

Every strategy returns a :class:`RemovalPlan`, so node attacks and edge
attacks are compared in the same unit: the fraction of edges removed. A node
removal costs the edges it still has when its turn comes; each edge is
charged exactly once. All ties go to the smaller node id or the
lexicographically smaller edge.
"""
from __future__ import annotations

import heapq

import numpy as np

from ._kernels import ci_order, edge_betweenness
from .errors import InvalidParam
from .graph import Graph
from .plan import RemovalPlan, node_order_plan

__all__ = [
    "site_percolation_plan",
    "bond_percolation_plan",
    "hd_plan",
    "hda_plan",
    "ci_plan",
    "corehd_plan",
    "edge_betweenness_plan",
    "collective_influence",
    "edge_betweenness_values",
]


def site_percolation_plan(g: Graph, seed: int) -> RemovalPlan:
    rng = np.random.default_rng(seed)
    return node_order_plan(g, rng.permutation(g.n), {"strategy": "site", "seed": seed})


def bond_percolation_plan(g: Graph, seed: int) -> RemovalPlan:
    rng = np.random.default_rng(seed)
    perm = rng.permutation(g.m)
    offsets = np.arange(g.m + 1, dtype=np.int64)
    return RemovalPlan(g.edges()[perm], offsets, ["random"] * g.m, g.m, {"strategy": "bond", "seed": seed})


def hd_plan(g: Graph) -> RemovalPlan:
    order = np.lexsort((np.arange(g.n), -g.degree))
    return node_order_plan(g, order, {"strategy": "hd"})


def _hda_order(g: Graph, alive: np.ndarray | None = None) -> list[int]:
    """Adaptive high-degree order over the nodes still ``alive``."""
    alive = np.ones(g.n, dtype=bool) if alive is None else alive.copy()
    deg = np.zeros(g.n, dtype=np.int64)
    e = g.edges()
    live = alive[e[:, 0]] & alive[e[:, 1]]
    np.add.at(deg, e[live, 0], 1)
    np.add.at(deg, e[live, 1], 1)
    heap = [(-int(deg[i]), int(i)) for i in np.flatnonzero(alive)]
    heapq.heapify(heap)
    order = []
    while heap:
        d, i = heapq.heappop(heap)
        if not alive[i] or -d != deg[i]:
            continue
        alive[i] = False
        order.append(i)
        for j in g.neighbors(i):
            if alive[j]:
                deg[j] -= 1
                heapq.heappush(heap, (-int(deg[j]), int(j)))
    return order


def hda_plan(g: Graph) -> RemovalPlan:
    return node_order_plan(g, _hda_order(g), {"strategy": "hda"})


def collective_influence(g: Graph, radius: int = 3, alive: np.ndarray | None = None) -> np.ndarray:
    """``CI_l(i) = (k_i - 1) * sum of (k_j - 1)`` over nodes exactly ``l`` hops away.

    Straight BFS per node, used for one-shot scores and as a test oracle for
    the adaptive kernel.
    """
    if radius < 1:
        raise InvalidParam("radius must be at least 1")
    alive = np.ones(g.n, dtype=bool) if alive is None else alive
    deg = np.array([np.count_nonzero(alive[g.neighbors(i)]) if alive[i] else 0 for i in range(g.n)])
    out = np.zeros(g.n)
    for i in range(g.n):
        if not alive[i] or deg[i] <= 1:
            continue
        dist = {i: 0}
        layer = [i]
        for d in range(radius):
            nxt = []
            for v in layer:
                for w in g.neighbors(v):
                    if alive[w] and w not in dist:
                        dist[w] = d + 1
                        nxt.append(w)
            layer = nxt
        out[i] = (deg[i] - 1) * sum(deg[j] - 1 for j in layer)
    return out


def ci_plan(g: Graph, radius: int = 3) -> RemovalPlan:
    """Adaptive collective-influence attack, HDA once every CI value is 0."""
    if radius < 1:
        raise InvalidParam("radius must be at least 1")
    head, alive = ci_order(g.indptr, g.indices, radius)
    order = head.tolist() + _hda_order(g, alive)
    return node_order_plan(g, order, {"strategy": "ci", "radius": radius, "ci_removals": len(head)})


def corehd_plan(g: Graph, core_degree: str = "residual") -> RemovalPlan:
    """Remove the highest-degree node of the residual 2-core, then HDA on the forest.

    ``core_degree="residual"`` ranks core members by their degree in the
    whole residual graph; ``"core"`` counts neighbors inside the core only.
    """
    if core_degree not in ("residual", "core"):
        raise InvalidParam(f"unknown core_degree {core_degree!r}")
    n = g.n
    alive = np.ones(n, dtype=bool)
    deg = g.degree.astype(np.int64).copy()
    in_core = np.ones(n, dtype=bool)
    cdeg = deg.copy()

    key = deg if core_degree == "residual" else cdeg
    heap: list[tuple[int, int]] = []

    def prune(start):
        stack = list(start)
        while stack:
            i = stack.pop()
            if not in_core[i]:
                continue
            in_core[i] = False
            for j in g.neighbors(i):
                if in_core[j]:
                    cdeg[j] -= 1
                    if cdeg[j] < 2:
                        stack.append(j)
                    elif key is cdeg:
                        heapq.heappush(heap, (-int(cdeg[j]), int(j)))

    prune(np.flatnonzero(cdeg < 2).tolist())
    heap = [(-int(key[i]), int(i)) for i in np.flatnonzero(in_core)]
    heapq.heapify(heap)
    order = []
    while heap:
        d, i = heapq.heappop(heap)
        if not in_core[i] or -d != key[i]:
            continue
        alive[i] = False
        order.append(i)
        in_core[i] = False
        drop = []
        for j in g.neighbors(i):
            if alive[j]:
                deg[j] -= 1
                if in_core[j]:
                    cdeg[j] -= 1
                    if cdeg[j] < 2:
                        drop.append(j)
        prune(drop)
        for j in g.neighbors(i):
            if in_core[j]:
                heapq.heappush(heap, (-int(key[j]), int(j)))
    order += _hda_order(g, alive)
    return node_order_plan(g, order, {"strategy": "corehd", "core_degree": core_degree, "core_removals": n - int(alive.sum())})


def _edge_slots(g: Graph) -> np.ndarray:
    """Map each CSR slot to the index of its undirected edge in ``g.edges()``."""
    rows = np.repeat(np.arange(g.n, dtype=np.int64), g.degree)
    u = np.minimum(rows, g.indices)
    v = np.maximum(rows, g.indices)
    return np.searchsorted(g.edge_keys(), u * max(g.n, 1) + v)


def edge_betweenness_values(g: Graph, alive: np.ndarray | None = None) -> np.ndarray:
    """Exact edge betweenness over unordered node pairs, aligned with ``g.edges()``."""
    alive = np.ones(g.m, dtype=np.bool_) if alive is None else alive
    return edge_betweenness(g.indptr, g.indices, _edge_slots(g), alive)


def _rank(eb: np.ndarray, edges: np.ndarray) -> np.ndarray:
    # rounding keeps float noise from breaking exact ties
    return np.lexsort((edges[:, 1], edges[:, 0], -np.round(eb, 9)))


def edge_betweenness_plan(g: Graph, recompute_interval: int | None = None) -> RemovalPlan:
    """One edge per batch in descending betweenness.

    Static ranking by default; with ``recompute_interval=r`` the ranking is
    recomputed on the residual graph after every ``r`` removals.
    """
    edges = g.edges()
    meta = {"strategy": "betweenness", "recompute_interval": recompute_interval}
    if recompute_interval is None:
        order = _rank(edge_betweenness_values(g), edges)
    else:
        if recompute_interval < 1:
            raise InvalidParam("recompute_interval must be positive")
        slots = _edge_slots(g)
        alive = np.ones(g.m, dtype=np.bool_)
        picked = []
        while len(picked) < g.m:
            eb = edge_betweenness(g.indptr, g.indices, slots, alive)
            eb[~alive] = -np.inf
            ranked = _rank(eb, edges)
            take = ranked[: min(recompute_interval, int(alive.sum()))]
            alive[take] = False
            picked.extend(take.tolist())
        order = np.array(picked, dtype=np.int64)
    offsets = np.arange(g.m + 1, dtype=np.int64)
    return RemovalPlan(edges[order], offsets, ["edge"] * g.m, g.m, meta)
