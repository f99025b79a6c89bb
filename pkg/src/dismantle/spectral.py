"""Hierarchical power-iterative normalized cut (HPI-Ncut).

The second eigenvector of the normalized Laplacian ``L_w = I - D^-1/2 W D^-1/2``
is approximated by power iteration on ``2I - L_w`` after projecting out the
trivial eigenvector ``d^1/2``. Nodes are split by the sign of that vector and
the crossing edges are removed. The largest remaining component is split
again until the giant component is small enough or the edge budget is spent.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .errors import DegenerateSplit, DegreeZero, EmptySide, InvalidParam, NumericalFailure, ZeroAssoc
from .graph import Graph, component_labels
from .plan import RemovalPlan

__all__ = [
    "SpectralConfig",
    "SpectralVector",
    "Bisection",
    "PartitionTree",
    "TreeNode",
    "eta",
    "laplacian_complement_apply",
    "power_iteration",
    "spectral_bisection",
    "ncut_value",
    "hpi_ncut",
]

MAX_RESTARTS = 5


def eta(n: int, exponent: float = 0.1) -> int:
    """Default iteration count ``ceil(ln(n) ** (1 + exponent))``, at least 1."""
    if n < 2:
        return 1
    return max(1, math.ceil(math.log(n) ** (1 + exponent)))


@dataclass
class SpectralConfig:
    eta_exponent: float = 0.1
    eta_override: int | None = None
    gcc_threshold: float = 0.01
    budget: float | None = None
    k_per_level: int = 2
    balanced: bool = False
    # vector projected out of every iterate: "degree" uses the true null
    # vector d^1/2, "constant" the all-ones vector (exact only for regular graphs)
    deflation: str = "degree"
    median_fallback: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.eta_exponent <= 0:
            raise InvalidParam("eta_exponent must be positive")
        if self.eta_override is not None and self.eta_override < 1:
            raise InvalidParam("eta_override must be at least 1")
        if not 0 < self.gcc_threshold <= 1:
            raise InvalidParam("gcc_threshold must lie in (0, 1]")
        if self.budget is not None and not 0 <= self.budget <= 1:
            raise InvalidParam("budget must lie in [0, 1]")
        if self.k_per_level < 2:
            raise InvalidParam("k_per_level must be at least 2")
        if self.deflation not in ("degree", "constant"):
            raise InvalidParam(f"unknown deflation mode {self.deflation!r}")

    def iterations(self, n: int) -> int:
        if self.eta_override is not None:
            return self.eta_override
        return eta(n, self.eta_exponent)


@dataclass
class SpectralVector:
    values: np.ndarray
    rayleigh: float
    history: np.ndarray | None = None
    restarts: int = 0


class Bisection(NamedTuple):
    side: np.ndarray  # node ids in the first cluster
    separator: np.ndarray  # (k, 2) crossing edges
    fallback: bool  # sign split was degenerate, median split used instead


# -- matrix-free operator ------------------------------------------------------


class _Operator:
    """``2I - L_w`` on a CSR adjacency with no isolated nodes."""

    def __init__(self, indptr: np.ndarray, indices: np.ndarray):
        deg = np.diff(indptr)
        if len(deg) and deg.min() == 0:
            raise DegreeZero(f"node {int(np.argmin(deg))} has degree 0")
        self.indptr = indptr
        self.indices = indices
        self.starts = indptr[:-1]
        self.deg = deg.astype(float)
        self.inv_sqrt = 1.0 / np.sqrt(self.deg)
        sq = np.sqrt(self.deg)
        self.null = sq / np.linalg.norm(sq)

    @property
    def n(self) -> int:
        return len(self.deg)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        w = v * self.inv_sqrt
        return v + self.inv_sqrt * np.add.reduceat(w[self.indices], self.starts)

    def rayleigh(self, v: np.ndarray) -> float:
        """``v^T L_w v / v^T v``."""
        vv = v @ v
        return float((2 * vv - v @ self(v)) / vv)


def laplacian_complement_apply(g: Graph, v) -> np.ndarray:
    """``(2I - L_w) v`` without forming any matrix."""
    v = np.asarray(v, dtype=float)
    if len(v) != g.n:
        raise InvalidParam(f"vector length {len(v)} != node count {g.n}")
    return _Operator(g.indptr, g.indices)(v)


def _power(op: _Operator, iters: int, rng: np.random.Generator, deflation: str, track: bool) -> SpectralVector:
    n = op.n
    if deflation == "degree":
        q = op.null
    else:
        q = np.full(n, 1 / math.sqrt(n))
    for attempt in range(MAX_RESTARTS + 1):
        v = rng.standard_normal(n)
        v -= (q @ v) * q
        nv = np.linalg.norm(v)
        if nv < 1e-12:
            continue
        v /= nv
        if n == 2 and deflation == "degree":
            # the complement of d^1/2 is one-dimensional: v is already exact
            hist = np.array([op.rayleigh(v)]) if track else None
            return SpectralVector(v, op.rayleigh(v), hist, attempt)
        history = [op.rayleigh(v)] if track else None
        for _ in range(iters):
            y = op(v)
            y -= (q @ y) * q
            ny = np.linalg.norm(y)
            if ny < 1e-12:
                break
            v = y / ny
            if track:
                history.append(op.rayleigh(v))
        else:
            hist = np.array(history) if track else None
            return SpectralVector(v, op.rayleigh(v), hist, attempt)
    raise NumericalFailure(f"power iteration collapsed to zero after {MAX_RESTARTS} restarts")


def power_iteration(g: Graph, cfg: SpectralConfig | None = None, rng=None, track: bool = False) -> SpectralVector:
    """Approximate the second eigenvector of ``L_w`` for a connected graph.

    With ``track=True`` the Rayleigh quotient after every iteration is kept in
    ``history`` (index 0 is the deflated starting vector).
    """
    cfg = cfg or SpectralConfig()
    if g.n < 2:
        raise InvalidParam("power iteration needs at least two nodes")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    op = _Operator(g.indptr, g.indices)
    return _power(op, cfg.iterations(g.n), rng, cfg.deflation, track)


# -- bisection -----------------------------------------------------------------


def _split(values: np.ndarray, balanced: bool, median_fallback: bool) -> tuple[np.ndarray, bool]:
    """Boolean mask of the first cluster."""
    n = len(values)
    if not balanced:
        mask = values > 0
        if 0 < mask.sum() < n:
            return mask, False
        if not median_fallback:
            raise DegenerateSplit("sign split left one side empty")
    order = np.lexsort((np.arange(n), -values))
    mask = np.zeros(n, dtype=bool)
    mask[order[: (n + 1) // 2]] = True
    return mask, not balanced


def spectral_bisection(g: Graph, cfg: SpectralConfig | None = None, rng=None) -> Bisection:
    """Split a connected graph by the sign of its approximate second eigenvector.

    Entries ``> 0`` form the first cluster, entries ``<= 0`` the second. In
    balanced mode the ``ceil(n/2)`` largest entries form the first cluster.
    """
    cfg = cfg or SpectralConfig()
    if g.n < 2:
        raise InvalidParam("bisection needs at least two nodes")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    vec = _power(_Operator(g.indptr, g.indices), cfg.iterations(g.n), rng, cfg.deflation, False)
    mask, fallback = _split(vec.values, cfg.balanced, cfg.median_fallback)
    e = g.edges()
    sep = e[mask[e[:, 0]] != mask[e[:, 1]]]
    return Bisection(np.flatnonzero(mask), sep, fallback)


def _as_mask(n: int, side) -> np.ndarray:
    side = np.asarray(side)
    if side.dtype == bool:
        return side
    mask = np.zeros(n, dtype=bool)
    mask[side.astype(np.int64)] = True
    return mask


def ncut_value(g: Graph, side) -> float:
    """``cut(A, B) * (1/assoc(A) + 1/assoc(B))`` with ``assoc(S)`` the degree sum."""
    mask = _as_mask(g.n, side)
    k = int(mask.sum())
    if k == 0 or k == g.n:
        raise EmptySide("both sides of the cut must be non-empty")
    deg = g.degree
    assoc_a = deg[mask].sum()
    assoc_b = deg[~mask].sum()
    if assoc_a == 0 or assoc_b == 0:
        raise ZeroAssoc("a side of the cut has no incident edges")
    e = g.edges()
    cut = np.count_nonzero(mask[e[:, 0]] != mask[e[:, 1]])
    return cut * (1 / assoc_a + 1 / assoc_b)


# -- hierarchy -----------------------------------------------------------------


@dataclass
class TreeNode:
    id: int
    parent: int | None
    depth: int
    nodes: np.ndarray
    separator: np.ndarray = field(default_factory=lambda: np.empty((0, 2), dtype=np.int64))
    children: list[int] = field(default_factory=list)
    fallback: bool = False


@dataclass
class PartitionTree:
    n: int
    nodes: list[TreeNode] = field(default_factory=list)
    removal_order: list[np.ndarray] = field(default_factory=list)

    def add(self, parent: int | None, depth: int, members: np.ndarray) -> TreeNode:
        node = TreeNode(len(self.nodes), parent, depth, members)
        self.nodes.append(node)
        if parent is not None:
            self.nodes[parent].children.append(node.id)
        return node

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    @property
    def max_depth(self) -> int:
        return max((t.depth for t in self.nodes if len(t.separator)), default=-1)

    def separator_keys(self, max_depth: int) -> np.ndarray:
        """Keys ``u*n+v`` of every separator edge at tree depth ``<= max_depth``."""
        seps = [t.separator for t in self.nodes if t.depth <= max_depth and len(t.separator)]
        if not seps:
            return np.empty(0, dtype=np.int64)
        e = np.concatenate(seps)
        return np.sort(e[:, 0] * max(self.n, 1) + e[:, 1])

    def to_lines(self) -> list[str]:
        """One record per tree node: ``depth,size,separator_size,u-v u-v ...``."""
        lines = []
        for t in self.nodes:
            edges = " ".join(f"{u}-{v}" for u, v in t.separator)
            lines.append(f"{t.depth},{len(t.nodes)},{len(t.separator)},{edges}")
        return lines


class _Component(NamedTuple):
    nodes: np.ndarray  # sorted global ids
    eids: np.ndarray  # indices into the global edge array


def _local_csr(comp: _Component, edges: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    e = edges[comp.eids]
    lu = np.searchsorted(comp.nodes, e[:, 0])
    lv = np.searchsorted(comp.nodes, e[:, 1])
    rows = np.concatenate([lu, lv])
    cols = np.concatenate([lv, lu])
    order = np.argsort(rows, kind="stable")
    indptr = np.zeros(len(comp.nodes) + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=len(comp.nodes)), out=indptr[1:])
    return indptr, cols[order], np.column_stack([lu, lv])


def _pieces(n_local: int, local_edges: np.ndarray, comp: _Component, keep: np.ndarray) -> list[_Component]:
    le = local_edges[keep]
    adj = csr_matrix((np.ones(len(le), dtype=np.int8), (le[:, 0], le[:, 1])), shape=(n_local, n_local))
    ncomp, labels = _cc(adj, directed=False)
    node_order = np.argsort(labels, kind="stable")
    node_bounds = np.concatenate([[0], np.cumsum(np.bincount(labels, minlength=ncomp))])
    kept_eids = comp.eids[keep]
    elab = labels[le[:, 0]]
    edge_order = np.argsort(elab, kind="stable")
    edge_bounds = np.concatenate([[0], np.cumsum(np.bincount(elab, minlength=ncomp))])
    out = []
    for c in range(ncomp):
        members = comp.nodes[node_order[node_bounds[c]:node_bounds[c + 1]]]
        out.append(_Component(members, kept_eids[edge_order[edge_bounds[c]:edge_bounds[c + 1]]]))
    return out


def _bisect(comp: _Component, edges: np.ndarray, cfg: SpectralConfig, rng) -> tuple[np.ndarray, list[_Component], bool]:
    """Separator edge ids, connected pieces and fallback flag for one component."""
    indptr, indices, local_edges = _local_csr(comp, edges)
    op = _Operator(indptr, indices)
    vec = _power(op, cfg.iterations(op.n), rng, cfg.deflation, False)
    mask, fallback = _split(vec.values, cfg.balanced, cfg.median_fallback)
    crossing = mask[local_edges[:, 0]] != mask[local_edges[:, 1]]
    return comp.eids[crossing], _pieces(op.n, local_edges, comp, ~crossing), fallback


def hpi_ncut(g: Graph, cfg: SpectralConfig | None = None) -> tuple[PartitionTree, RemovalPlan]:
    """Hierarchically bisect the current largest component.

    Each step bisects the largest component (and, when ``k_per_level > 2``,
    the largest resulting piece again, ``k_per_level - 1`` bisections in all)
    and emits the crossing edges as one batch. Stops once the largest
    component holds fewer than ``gcc_threshold * n`` nodes, once the removed
    fraction reaches ``budget``, or when only singletons remain.
    """
    cfg = cfg or SpectralConfig()
    if g.n == 0:
        raise InvalidParam("graph has no nodes")
    rng = np.random.default_rng(cfg.seed)
    edges = g.edges()
    n, m = g.n, g.m
    tree = PartitionTree(n)
    root = tree.add(None, 0, np.arange(n))

    ncomp, labels = component_labels(g)
    comps: dict[int, _Component] = {}
    heap: list[tuple[int, int, int]] = []

    def push(tid: int, comp: _Component):
        comps[tid] = comp
        heapq.heappush(heap, (-len(comp.nodes), int(comp.nodes[0]), tid))

    all_eids = np.arange(m)
    if ncomp == 1:
        push(root.id, _Component(root.nodes, all_eids))
    else:
        base = _pieces(n, edges, _Component(root.nodes, all_eids), np.ones(m, dtype=bool))
        for piece in base:
            push(tree.add(root.id, 1, piece.nodes).id, piece)

    batches: list[np.ndarray] = []
    removed = 0
    fallbacks = 0
    while heap:
        size = -heap[0][0]
        if size / n < cfg.gcc_threshold or size <= 1:
            break
        if cfg.budget is not None and removed >= cfg.budget * m:
            break
        step: list[np.ndarray] = []
        local: list[tuple[int, int, int]] = [heapq.heappop(heap)]
        for _ in range(cfg.k_per_level - 1):
            if not local or -local[0][0] <= 1:
                break
            _, _, tid = heapq.heappop(local)
            comp = comps.pop(tid)
            sep_ids, pieces, fb = _bisect(comp, edges, cfg, rng)
            node = tree.nodes[tid]
            node.separator = edges[sep_ids]
            node.fallback = fb
            fallbacks += fb
            step.append(sep_ids)
            for piece in pieces:
                child = tree.add(tid, node.depth + 1, piece.nodes)
                comps[child.id] = piece
                heapq.heappush(local, (-len(piece.nodes), int(piece.nodes[0]), child.id))
        for item in local:
            heapq.heappush(heap, item)
        sep = np.sort(np.concatenate(step))
        batches.append(edges[sep])
        tree.removal_order.append(edges[sep])
        removed += len(sep)

    meta = {"strategy": "hpi-ncut", "median_fallbacks": fallbacks, "seed": cfg.seed}
    plan = RemovalPlan.from_batches(batches, ["ncut"] * len(batches), m, meta)
    return tree, plan


def dense_normalized_laplacian(g: Graph) -> np.ndarray:
    """Dense ``L_w`` for small graphs; used by tests and diagnostics only."""
    a = g.to_csr().toarray().astype(float)
    inv = 1 / np.sqrt(a.sum(axis=1))
    return np.eye(g.n) - inv[:, None] * a * inv[None, :]

