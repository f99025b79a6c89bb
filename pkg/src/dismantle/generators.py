"""Seedable synthetic network generators (ER, configuration-model SF, SBM)."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .errors import GenerationFailure, InvalidParam
from .graph import Graph

__all__ = [
    "GenSpec", "build", "gen_er", "gen_sf", "gen_sbm", "sbm_probabilities", "sf_degree_distribution",
    "block_labels", "equal_blocks", "table_network", "TABLE_NETWORKS",
]

SBM_DEFAULT_RATIO = 30.0


def _sample_pairs(rng: np.random.Generator, n_pairs: int, p: float) -> np.ndarray:
    """Indices of a Bernoulli(p) subset of ``range(n_pairs)``."""
    if p <= 0 or n_pairs == 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1:
        return np.arange(n_pairs, dtype=np.int64)
    k = rng.binomial(n_pairs, p)
    return np.sort(rng.choice(n_pairs, size=k, replace=False)).astype(np.int64)


def _triu_pairs(idx: np.ndarray, n: int) -> np.ndarray:
    """Map linear indices over ``{(i, j): i < j < n}`` (row-major) to pairs."""
    # row i starts at offset i*n - i*(i+1)/2 ; invert with the quadratic formula
    b = 2 * n - 1
    i = np.floor((b - np.sqrt(b * b - 8.0 * idx)) / 2).astype(np.int64)
    start = i * n - i * (i + 1) // 2
    # guard float rounding at row boundaries
    low = idx < start
    i[low] -= 1
    start = i * n - i * (i + 1) // 2
    nxt = (i + 1) * n - (i + 1) * (i + 2) // 2
    high = idx >= nxt
    i[high] += 1
    start = i * n - i * (i + 1) // 2
    j = idx - start + i + 1
    return np.column_stack([i, j])


def gen_er(n: int, mean_degree: float, seed: int) -> Graph:
    """G(n, p) with ``p = mean_degree / (n - 1)``."""
    if n < 2 or not 0 < mean_degree <= n - 1:
        raise InvalidParam(f"ER needs n >= 2 and 0 < mean_degree <= n-1, got n={n}, mean_degree={mean_degree}")
    rng = np.random.default_rng(seed)
    p = mean_degree / (n - 1)
    idx = _sample_pairs(rng, n * (n - 1) // 2, p)
    return Graph.from_edges(n, _triu_pairs(idx, n))


def sf_degree_distribution(gamma: float, mean_degree: float, k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated power law with its lowest-degree mass tuned to hit ``mean_degree``.

    Returns ``(degrees, probabilities)``. Starting from ``k_min = 1``, the
    weight on ``k_min`` is reduced until the mean matches; if even zero weight
    is not enough, ``k_min`` is raised by one and the search repeats.
    """
    for k_min in range(1, k_max):
        ks = np.arange(k_min, k_max + 1, dtype=float)
        pk = ks ** -gamma
        tail_w, tail_kw = pk[1:].sum(), (ks[1:] * pk[1:]).sum()
        if tail_kw / tail_w < mean_degree:
            continue
        # (w k_min + tail_kw) / (w + tail_w) = mean  ->  solve for w
        w = (tail_kw - mean_degree * tail_w) / (mean_degree - k_min)
        if w < 0:
            continue
        pk = pk.copy()
        pk[0] = w
        return ks.astype(np.int64), pk / pk.sum()
    raise GenerationFailure(f"mean degree {mean_degree} unreachable with gamma={gamma}, k_max={k_max}")


def gen_sf(n: int, gamma: float, mean_degree: float, seed: int, max_resamples: int = 200) -> Graph:
    """Configuration-model scale-free graph with cutoff ``floor(sqrt(n))``.

    Self-loops and repeated stub pairs are discarded.
    """
    if n < 2 or gamma <= 2 or mean_degree <= 0:
        raise InvalidParam(f"SF needs n >= 2, gamma > 2, mean_degree > 0 (got {n}, {gamma}, {mean_degree})")
    k_max = max(int(math.isqrt(n)), 2)
    if mean_degree >= k_max:
        raise InvalidParam(f"mean degree {mean_degree} not below cutoff {k_max}")
    ks, pk = sf_degree_distribution(gamma, mean_degree, k_max)
    rng = np.random.default_rng(seed)
    for _ in range(max_resamples):
        deg = rng.choice(ks, size=n, p=pk)
        if abs(deg.mean() - mean_degree) <= 0.05 * mean_degree:
            break
    else:
        raise GenerationFailure(f"sample mean never within 5% of {mean_degree} in {max_resamples} draws")
    if deg.sum() % 2:
        bump = np.flatnonzero(deg < k_max)
        deg[rng.choice(bump)] += 1
    stubs = np.repeat(np.arange(n, dtype=np.int64), deg)
    rng.shuffle(stubs)
    return Graph.from_edges(n, stubs.reshape(-1, 2))


def sbm_probabilities(sizes, mean_degree: float, ratio: float = SBM_DEFAULT_RATIO) -> tuple[float, float]:
    """``(p_in, p_out)`` with ``p_in = ratio * p_out`` giving the requested mean degree."""
    sizes = np.asarray(sizes, dtype=float)
    n = sizes.sum()
    intra_pairs = (sizes * (sizes - 1)).sum() / 2
    inter_pairs = n * (n - 1) / 2 - intra_pairs
    p_out = mean_degree * n / 2 / (ratio * intra_pairs + inter_pairs)
    return ratio * p_out, p_out


def gen_sbm(sizes, p_in: float, p_out: float, seed: int) -> Graph:
    """Stochastic block model with independent edge coin flips."""
    sizes = [int(s) for s in sizes]
    if not sizes or min(sizes) < 1 or sum(sizes) < 2:
        raise InvalidParam("SBM needs positive block sizes summing to at least 2")
    if not (0 <= p_in <= 1 and 0 <= p_out <= 1):
        raise InvalidParam(f"probabilities must lie in [0, 1] (p_in={p_in}, p_out={p_out})")
    rng = np.random.default_rng(seed)
    starts = np.concatenate([[0], np.cumsum(sizes)])
    chunks = []
    for a, sa in enumerate(sizes):
        idx = _sample_pairs(rng, sa * (sa - 1) // 2, p_in)
        if len(idx):
            chunks.append(_triu_pairs(idx, sa) + starts[a])
        for b in range(a + 1, len(sizes)):
            sb = sizes[b]
            idx = _sample_pairs(rng, sa * sb, p_out)
            if len(idx):
                chunks.append(np.column_stack([idx // sb + starts[a], idx % sb + starts[b]]))
    edges = np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
    return Graph.from_edges(int(starts[-1]), edges)


def block_labels(sizes) -> np.ndarray:
    return np.repeat(np.arange(len(sizes)), sizes)


def equal_blocks(n: int, k: int) -> list[int]:
    base, extra = divmod(n, k)
    return [base + (1 if i < extra else 0) for i in range(k)]


@dataclass
class GenSpec:
    """Serializable description of a synthetic network.

    ``params`` by kind:
      ER:  mean_degree
      SF:  gamma, mean_degree
      SBM: blocks (count) or sizes (list), and either p_in/p_out or
           mean_degree (+ optional ratio)
    """

    kind: str
    n: int
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        self.kind = self.kind.upper()
        if self.kind not in ("ER", "SF", "SBM"):
            raise InvalidParam(f"unknown generator kind {self.kind!r}")
        if self.n < 2:
            raise InvalidParam("n must be at least 2")
        if self.kind == "SF" and self.params.get("gamma", 0) <= 2:
            raise InvalidParam("SF exponent gamma must exceed 2")
        if self.kind == "SBM":
            sizes = self.block_sizes()
            if sum(sizes) != self.n:
                raise InvalidParam(f"block sizes sum to {sum(sizes)}, expected {self.n}")
            for key in ("p_in", "p_out"):
                if key in self.params and not 0 <= self.params[key] <= 1:
                    raise InvalidParam(f"{key} must lie in [0, 1]")

    def block_sizes(self) -> list[int]:
        if "sizes" in self.params:
            return [int(s) for s in self.params["sizes"]]
        return equal_blocks(self.n, int(self.params.get("blocks", 2)))

    def sbm_probabilities(self) -> tuple[float, float]:
        if "p_in" in self.params and "p_out" in self.params:
            return float(self.params["p_in"]), float(self.params["p_out"])
        ratio = float(self.params.get("ratio", SBM_DEFAULT_RATIO))
        return sbm_probabilities(self.block_sizes(), float(self.params["mean_degree"]), ratio)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GenSpec":
        return cls(kind=d["kind"], n=int(d["n"]), params=dict(d.get("params", {})), seed=int(d.get("seed", 0)))


def build(spec: GenSpec) -> Graph:
    p = spec.params
    if spec.kind == "ER":
        return gen_er(spec.n, float(p["mean_degree"]), spec.seed)
    if spec.kind == "SF":
        return gen_sf(spec.n, float(p["gamma"]), float(p["mean_degree"]), spec.seed)
    p_in, p_out = spec.sbm_probabilities()
    return gen_sbm(spec.block_sizes(), p_in, p_out, spec.seed)


# Synthetic rows of the benchmark table, keyed by short name.
TABLE_NETWORKS = {
    "er": dict(kind="ER", n=2500, params={"mean_degree": 10.0}),
    "sf2.5": dict(kind="SF", n=10000, params={"gamma": 2.5, "mean_degree": 4.68}),
    "sf3.5": dict(kind="SF", n=10000, params={"gamma": 3.5, "mean_degree": 2.35}),
    "sbm": dict(kind="SBM", n=4232, params={"blocks": 10, "mean_degree": 2.60}),
}


def table_network(name: str, seed: int) -> GenSpec:
    try:
        d = TABLE_NETWORKS[name]
    except KeyError:
        raise InvalidParam(f"unknown network {name!r}; choose from {sorted(TABLE_NETWORKS)}") from None
    return GenSpec(d["kind"], d["n"], dict(d["params"]), seed)
