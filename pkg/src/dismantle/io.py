"""Edge-list ingestion and export (KONECT ``%`` and SNAP ``#`` comment styles)."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraph, ParseError
from .graph import Graph, connected_components

log = logging.getLogger(__name__)

__all__ = ["IngestStats", "read_edge_list", "load_edge_list", "write_edge_list", "extract_gcc", "node_index"]


@dataclass
class IngestStats:
    raw_lines: int = 0
    edge_lines: int = 0
    self_loops: int = 0
    duplicates: int = 0


def _label_order(labels: list[str]) -> list[str]:
    """Integer labels sort numerically; anything else keeps first-seen order."""
    try:
        return sorted(labels, key=int)
    except ValueError:
        return labels


def read_edge_list(path: str | os.PathLike) -> tuple[Graph, IngestStats]:
    stats = IngestStats()
    first_seen: dict[str, None] = {}
    pairs: list[tuple[str, str]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stats.raw_lines += 1
            s = line.strip()
            if not s or s[0] in "%#":
                continue
            tok = s.split()
            if len(tok) < 2:
                raise ParseError(f"expected two node ids, got {s!r}", lineno)
            u, v = tok[0], tok[1]
            stats.edge_lines += 1
            first_seen.setdefault(u)
            first_seen.setdefault(v)
            if u == v:
                stats.self_loops += 1
                continue
            pairs.append((u, v))
    if not first_seen:
        raise EmptyGraph(f"{path}: no edges found")
    labels = _label_order(list(first_seen))
    index = {lab: i for i, lab in enumerate(labels)}
    arr = np.array([(index[u], index[v]) for u, v in pairs], dtype=np.int64).reshape(-1, 2)
    g = Graph.from_edges(len(labels), arr, labels)
    stats.duplicates = len(pairs) - g.m
    return g, stats


def load_edge_list(path: str | os.PathLike) -> Graph:
    """Parse an edge list; self-loops are dropped and duplicates collapsed."""
    g, stats = read_edge_list(path)
    if stats.self_loops or stats.duplicates:
        log.warning("%s: dropped %d self-loops, collapsed %d duplicate edges", path, stats.self_loops, stats.duplicates)
    return g


def write_edge_list(g: Graph, path: str | os.PathLike) -> None:
    labels = g.labels if g.labels is not None else [str(i) for i in range(g.n)]
    with open(path, "w") as fh:
        fh.write(f"% undirected simple graph: {g.n} nodes, {g.m} edges\n")
        for u, v in g.edges():
            fh.write(f"{labels[u]} {labels[v]}\n")


def extract_gcc(g: Graph) -> Graph:
    """Induced subgraph on the largest component, original labels kept."""
    if g.n == 0:
        return g
    comp = connected_components(g).components[0]
    if len(comp) == g.n:
        return g
    sub = g.subgraph(comp)
    if g.labels is None:
        sub.labels = [str(int(i)) for i in comp]
    return sub


def node_index(g: Graph) -> dict[str, int]:
    labels = g.labels if g.labels is not None else [str(i) for i in range(g.n)]
    return {str(lab): i for i, lab in enumerate(labels)}
