"""RemovalPlan: the common output format of every attack strategy."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ParseError, PlanMismatch
from .graph import Graph, canonical_edges


@dataclass
class RemovalPlan:
    """Ordered batches of edges.

    Stored flat: ``edges`` holds every batch back to back and batch ``i`` is
    ``edges[offsets[i]:offsets[i + 1]]``. ``tags`` records where each batch
    came from (a node id, ``"edge"``, ``"random"`` or ``"ncut"``).
    """

    edges: np.ndarray
    offsets: np.ndarray
    tags: list[str]
    total_edges: int
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_batches(cls, batches: Sequence, tags: Sequence[str], total_edges: int, meta=None) -> "RemovalPlan":
        arrays = [canonical_edges(b) for b in batches]
        sizes = [len(a) for a in arrays]
        offsets = np.zeros(len(arrays) + 1, dtype=np.int64)
        np.cumsum(sizes, out=offsets[1:])
        edges = np.concatenate(arrays) if arrays else np.empty((0, 2), dtype=np.int64)
        return cls(edges.reshape(-1, 2), offsets, [str(t) for t in tags], int(total_edges), dict(meta or {}))

    @classmethod
    def empty(cls, total_edges: int, meta=None) -> "RemovalPlan":
        return cls.from_batches([], [], total_edges, meta)

    def __len__(self) -> int:
        return len(self.offsets) - 1

    def batch(self, i: int) -> np.ndarray:
        return self.edges[self.offsets[i]:self.offsets[i + 1]]

    @property
    def batches(self) -> list[np.ndarray]:
        return [self.batch(i) for i in range(len(self))]

    @property
    def batch_sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    def cumulative_costs(self) -> np.ndarray:
        if self.total_edges == 0:
            return np.zeros(len(self))
        return self.offsets[1:] / self.total_edges

    def truncate(self, n_batches: int) -> "RemovalPlan":
        off = self.offsets[: n_batches + 1]
        return RemovalPlan(self.edges[: off[-1]], off.copy(), self.tags[:n_batches], self.total_edges, dict(self.meta))

    def upto_cost(self, budget: float) -> "RemovalPlan":
        """Prefix of batches that starts before ``budget`` is reached.

        The last batch may push the cost past the budget; batches are atomic.
        """
        costs_before = self.offsets[:-1] / max(self.total_edges, 1)
        k = int(np.searchsorted(costs_before, budget, side="left"))
        return self.truncate(k)

    def validate(self, g: Graph) -> None:
        """Raise PlanMismatch unless every edge is in ``g`` and batches are disjoint."""
        if self.total_edges != g.m:
            raise PlanMismatch(f"plan built for {self.total_edges} edges, graph has {g.m}")
        if len(self.edges) == 0:
            return
        n = max(g.n, 1)
        if self.edges.min() < 0 or self.edges.max() >= g.n:
            raise PlanMismatch("plan references nodes outside the graph")
        keys = self.edges[:, 0] * n + self.edges[:, 1]
        if len(np.unique(keys)) != len(keys):
            raise PlanMismatch("plan removes an edge more than once")
        missing = ~np.isin(keys, g.edge_keys())
        if missing.any():
            u, v = self.edges[np.argmax(missing)]
            raise PlanMismatch(f"edge ({u}, {v}) is not in the graph")

    def to_csv(self, labels: Sequence | None = None) -> str:
        """CSV rows ``batch_index,provenance,edge_u,edge_v``; empty batches get blank endpoints.

        With ``labels`` the endpoints (and node-id provenance tags) are written
        as original node labels.
        """
        name = (lambda i: str(labels[i])) if labels is not None else (lambda i: str(int(i)))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["batch_index", "provenance", "edge_u", "edge_v"])
        for i in range(len(self)):
            tag = self.tags[i]
            if labels is not None and tag.isdigit():
                tag = name(int(tag))
            b = self.batch(i)
            if len(b) == 0:
                w.writerow([i, tag, "", ""])
            for u, v in b:
                w.writerow([i, tag, name(u), name(v)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, total_edges: int, index: dict[str, int] | None = None) -> "RemovalPlan":
        """Inverse of :meth:`to_csv`; ``index`` maps labels back to node ids."""
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0][:4] != ["batch_index", "provenance", "edge_u", "edge_v"]:
            raise ParseError("missing plan header", 1)

        def node(tok: str, lineno: int) -> int:
            if index is None:
                return int(tok)
            try:
                return index[tok]
            except KeyError:
                raise PlanMismatch(f"line {lineno}: unknown node {tok!r}") from None

        batches: list[list[tuple[int, int]]] = []
        tags: list[str] = []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            try:
                idx = int(row[0])
                edge = (node(row[2], lineno), node(row[3], lineno)) if row[2] != "" else None
            except (ValueError, IndexError):
                raise ParseError(f"bad plan row {row!r}", lineno) from None
            if idx == len(batches):
                batches.append([])
                tag = row[1]
                if index is not None and tag in index:
                    tag = str(index[tag])
                tags.append(tag)
            elif idx != len(batches) - 1:
                raise ParseError(f"batch index {idx} out of order", lineno)
            if edge is not None:
                batches[-1].append(edge)
        return cls.from_batches(batches, tags, total_edges)


def node_order_plan(g: Graph, order, meta=None) -> RemovalPlan:
    """Plan that removes nodes in ``order``.

    Each edge is charged once, to whichever endpoint comes first; a node's
    batch is whatever incident edges survive until its turn.
    """
    order = np.asarray(order, dtype=np.int64)
    rank = np.full(g.n, len(order), dtype=np.int64)
    rank[order] = np.arange(len(order))
    e = g.edges()
    charge = np.minimum(rank[e[:, 0]], rank[e[:, 1]])
    keep = charge < len(order)
    e, charge = e[keep], charge[keep]
    idx = np.lexsort((e[:, 1], e[:, 0], charge))
    offsets = np.zeros(len(order) + 1, dtype=np.int64)
    np.cumsum(np.bincount(charge, minlength=len(order)), out=offsets[1:])
    return RemovalPlan(e[idx], offsets, [str(int(v)) for v in order], g.m, dict(meta or {}))
