"""Undirected simple graphs stored as CSR adjacency arrays.

A :class:`Graph` is immutable. Removal operations return a new graph on the
same node set, so isolated nodes survive and GCC fractions stay relative to
the original node count.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .errors import InvalidParam, MissingEdge, UnknownNode

__all__ = [
    "Graph",
    "ComponentReport",
    "canonical_edges",
    "connected_components",
    "component_labels",
    "gcc_fraction",
    "remove_edges",
    "remove_node",
    "k_core",
    "two_core",
]


def canonical_edges(edges) -> np.ndarray:
    """Return edges as an int64 ``(k, 2)`` array with ``u < v`` in each row.

    Self-loops are kept; callers decide whether they are an error.
    """
    if isinstance(edges, np.ndarray):
        arr = edges
    else:
        arr = np.array(list(edges), dtype=np.int64)
    arr = np.asarray(arr, dtype=np.int64).reshape(-1, 2)
    return np.sort(arr, axis=1)


class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    ``indptr``/``indices`` form a CSR adjacency with each neighbor list sorted
    ascending. ``labels`` optionally holds the original identifiers of
    ingested nodes.
    """

    __slots__ = ("n", "indptr", "indices", "labels", "_edges", "_deg")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray, labels: Sequence | None = None):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.labels = list(labels) if labels is not None else None
        self._edges = None
        self._deg = None

    @classmethod
    def from_edges(cls, n: int, edges, labels: Sequence | None = None) -> "Graph":
        """Build a graph, dropping self-loops and collapsing duplicate edges."""
        if n < 0:
            raise InvalidParam("node count must be non-negative")
        arr = canonical_edges(edges)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise UnknownNode("edge endpoint outside 0..n-1")
        arr = arr[arr[:, 0] != arr[:, 1]]
        keys = np.unique(arr[:, 0] * max(n, 1) + arr[:, 1])
        return cls._from_keys(n, keys, labels)

    @classmethod
    def _from_keys(cls, n: int, keys: np.ndarray, labels=None) -> "Graph":
        # keys must be unique u*n+v with u < v
        u = keys // max(n, 1)
        v = keys % max(n, 1)
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        order = np.lexsort((cols, rows))
        indices = cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        g = cls(n, indptr, indices, labels)
        g._edges = np.column_stack([u, v])
        return g

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_edges(n, np.empty((0, 2), dtype=np.int64))

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degree(self) -> np.ndarray:
        if self._deg is None:
            self._deg = np.diff(self.indptr)
        return self._deg

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.indices[self.indptr[i]:self.indptr[i + 1]].tolist() for i in range(self.n)]

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def edges(self) -> np.ndarray:
        """Canonical edge array, ``u < v``, sorted lexicographically."""
        if self._edges is None:
            rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degree)
            mask = rows < self.indices
            self._edges = np.column_stack([rows[mask], self.indices[mask]])
        return self._edges

    def edge_keys(self) -> np.ndarray:
        e = self.edges()
        return e[:, 0] * max(self.n, 1) + e[:, 1]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < len(nb) and nb[k] == v)

    def to_csr(self) -> csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def subgraph(self, nodes) -> "Graph":
        """Induced subgraph on ``nodes`` (reindexed in ascending id order)."""
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        local = np.full(self.n, -1, dtype=np.int64)
        local[nodes] = np.arange(len(nodes))
        e = self.edges()
        keep = (local[e[:, 0]] >= 0) & (local[e[:, 1]] >= 0)
        sub = local[e[keep]]
        labels = None
        if self.labels is not None:
            labels = [self.labels[i] for i in nodes]
        return Graph.from_edges(len(nodes), sub, labels)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass
class ComponentReport:
    components: list[np.ndarray]
    gcc_fraction: float
    n: int = 0
    sizes: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))


def component_labels(g: Graph) -> tuple[int, np.ndarray]:
    if g.n == 0:
        return 0, np.empty(0, dtype=np.int64)
    ncomp, labels = _cc(g.to_csr(), directed=False)
    return int(ncomp), labels.astype(np.int64)


def connected_components(g: Graph) -> ComponentReport:
    """Components sorted by size descending, ties by smallest member id."""
    if g.n == 0:
        return ComponentReport([], 0.0, 0)
    ncomp, labels = component_labels(g)
    sizes = np.bincount(labels, minlength=ncomp)
    first = np.full(ncomp, g.n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(g.n))
    rank = np.lexsort((first, -sizes))
    order = np.argsort(labels, kind="stable")
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    groups = [order[bounds[c]:bounds[c + 1]] for c in range(ncomp)]
    comps = [groups[c] for c in rank]
    return ComponentReport(comps, sizes[rank[0]] / g.n, g.n, sizes[rank])


def gcc_fraction(g: Graph) -> float:
    if g.n == 0:
        return 0.0
    ncomp, labels = component_labels(g)
    return np.bincount(labels).max() / g.n


def remove_edges(g: Graph, es) -> Graph:
    """Return a copy of ``g`` without the edges in ``es``."""
    arr = canonical_edges(es)
    if arr.size == 0:
        return g
    n = max(g.n, 1)
    if arr.min() < 0 or arr.max() >= g.n:
        raise MissingEdge("edge endpoint outside the graph")
    drop = np.unique(arr[:, 0] * n + arr[:, 1])
    keys = g.edge_keys()
    present = np.isin(drop, keys, assume_unique=True)
    if not present.all():
        k = drop[~present][0]
        raise MissingEdge(f"edge ({k // n}, {k % n}) not in graph")
    kept = keys[~np.isin(keys, drop, assume_unique=True)]
    return Graph._from_keys(g.n, kept, g.labels)


def remove_node(g: Graph, v: int) -> tuple[Graph, np.ndarray]:
    """Delete every edge incident to ``v``; the node stays as an isolated vertex."""
    if not 0 <= v < g.n:
        raise UnknownNode(f"node {v} not in graph")
    nb = g.neighbors(v)
    removed = canonical_edges(np.column_stack([np.full(len(nb), v), nb]))
    return remove_edges(g, removed), removed


def k_core(g: Graph, k: int) -> np.ndarray:
    """Nodes of the k-core, found by repeatedly pruning nodes of degree < k."""
    deg = g.degree.copy()
    alive = np.ones(g.n, dtype=bool)
    queue = deque(np.flatnonzero(deg < k).tolist())
    alive[deg < k] = False
    while queue:
        i = queue.popleft()
        for j in g.neighbors(i):
            if alive[j]:
                deg[j] -= 1
                if deg[j] < k:
                    alive[j] = False
                    queue.append(j)
    return np.flatnonzero(alive)


def two_core(g: Graph) -> np.ndarray:
    return k_core(g, 2)


def graph_from_adjacency(adj: Iterable[Iterable[int]]) -> Graph:
    adj = [list(a) for a in adj]
    edges = [(i, j) for i, nb in enumerate(adj) for j in nb]
    return Graph.from_edges(len(adj), edges)
