"""Discrete-time SIR spreading.

Per step, each infectious node infects each susceptible neighbor with
probability ``beta`` and then recovers with probability ``gamma``. A node
infected during step ``t -> t+1`` is infectious at ``t+1`` and can recover at
the earliest at ``t+2``.

Runs are simulated event-wise: every node draws its infectious period
``T ~ Geometric(gamma)`` and every directed edge ``i -> j`` draws the step of
its first successful contact ``tau ~ Geometric(beta)``. ``j`` is infected at
``t_i + tau`` if ``tau <= T_i``. This is the same process as flipping coins
step by step, but the randomness is attached to nodes and edges, so a graph
and an edge-removed copy of it can share every draw (``reference=``).
"""
from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParam
from .graph import Graph

__all__ = ["SirParams", "SirTrace", "sir_run", "sir_ensemble"]


@dataclass
class SirParams:
    beta: float = 0.10
    gamma: float = 0.02
    initial_infected: int | list[int] = 1
    max_steps: int = 2000
    seed: int = 0

    def __post_init__(self):
        if not (0 <= self.beta <= 1 and 0 <= self.gamma <= 1):
            raise InvalidParam("beta and gamma must lie in [0, 1]")
        if self.max_steps < 0:
            raise InvalidParam("max_steps must be non-negative")

    @property
    def r0(self) -> float:
        return self.beta / self.gamma if self.gamma > 0 else float("inf")


@dataclass
class SirTrace:
    S: np.ndarray
    I: np.ndarray
    R: np.ndarray
    I_std: np.ndarray | None = None
    R_std: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def t(self) -> np.ndarray:
        return np.arange(len(self.S))

    @property
    def n(self) -> float:
        return float(self.S[0] + self.I[0] + self.R[0])

    @property
    def final_size(self) -> float:
        """Nodes ever infected by the end of the trace."""
        return float(self.I[-1] + self.R[-1])

    @property
    def peak_time(self) -> int:
        return int(np.argmax(self.I))

    def padded(self, length: int) -> "SirTrace":
        extra = length - len(self.S)
        if extra <= 0:
            return self
        pad = lambda a: np.concatenate([a, np.full(extra, a[-1])])
        return SirTrace(pad(self.S), pad(self.I), pad(self.R), meta=dict(self.meta))

    def to_csv(self) -> str:
        lines = ["t,S_mean,I_mean,R_mean,I_std,R_std"]
        zeros = np.zeros(len(self.S))
        i_std = self.I_std if self.I_std is not None else zeros
        r_std = self.R_std if self.R_std is not None else zeros
        for t in range(len(self.S)):
            vals = (self.S[t], self.I[t], self.R[t], i_std[t], r_std[t])
            lines.append(f"{t}," + ",".join(repr(float(v)) for v in vals))
        return "\n".join(lines) + "\n"


def _geometric(rng: np.random.Generator, p: float, size) -> np.ndarray:
    """Trials until first success on ``{1, 2, ...}``; ``p = 0`` never succeeds."""
    cap = np.iinfo(np.int64).max // 4  # "never", with room to add times
    if p <= 0:
        return np.full(size, cap, dtype=np.int64)
    return np.minimum(rng.geometric(p, size=size), cap).astype(np.int64)


def sir_run(g: Graph, params: SirParams, run: int = 0, reference: Graph | None = None) -> SirTrace:
    """Single SIR realisation.

    ``run`` selects the random stream, ``rng = default_rng([seed, run])``.
    With ``reference`` (a supergraph of ``g`` on the same nodes) the per-edge
    draws are made for the reference's edges, so runs on ``g`` and on
    ``reference`` with the same seed are coupled.
    """
    ref = g if reference is None else reference
    if ref.n != g.n:
        raise InvalidParam("reference graph must have the same nodes")
    n = g.n
    rng = np.random.default_rng([params.seed, run])
    if isinstance(params.initial_infected, (int, np.integer)):
        k = int(params.initial_infected)
        if not 0 <= k <= n:
            raise InvalidParam(f"cannot seed {k} infections in {n} nodes")
        seeds = rng.choice(n, size=k, replace=False)
    else:
        seeds = np.unique(np.asarray(params.initial_infected, dtype=np.int64))
        if len(seeds) and (seeds.min() < 0 or seeds.max() >= n):
            raise InvalidParam("initial infected node outside the graph")
    period = _geometric(rng, params.gamma, n)
    ref_edges = ref.edges()
    delay = _geometric(rng, params.beta, (len(ref_edges), 2))  # [:, 0] u->v, [:, 1] v->u

    if reference is not None and ref.m != g.m:
        keep = np.isin(ref.edge_keys(), g.edge_keys())
        ref_edges, delay = ref_edges[keep], delay[keep]
    # per CSR slot of g: delay of the contact from row node to column node
    rows = np.repeat(np.arange(n, dtype=np.int64), g.degree)
    cols = g.indices
    forward = rows < cols
    keys = np.minimum(rows, cols) * max(n, 1) + np.maximum(rows, cols)
    pos = np.searchsorted(ref_edges[:, 0] * max(n, 1) + ref_edges[:, 1], keys)
    slot_delay = np.where(forward, delay[pos, 0], delay[pos, 1]) if len(pos) else np.empty(0, dtype=np.int64)

    horizon = params.max_steps
    never = np.iinfo(np.int64).max
    t_inf = np.full(n, never, dtype=np.int64)
    heap = [(0, int(s)) for s in seeds]
    for s in seeds:
        t_inf[s] = 0
    done = np.zeros(n, dtype=bool)
    indptr = g.indptr
    while heap:
        t, i = heapq.heappop(heap)
        if done[i] or t != t_inf[i]:
            continue
        done[i] = True
        lo, hi = indptr[i], indptr[i + 1]
        d = slot_delay[lo:hi]
        for j, dj in zip(cols[lo:hi][d <= period[i]], d[d <= period[i]]):
            tj = t + int(dj)
            if tj < t_inf[j] and tj <= horizon:
                t_inf[j] = tj
                heapq.heappush(heap, (tj, int(j)))

    infected = t_inf != never
    start = t_inf[infected]
    end = np.minimum(start + period[infected], never // 2)
    last = int(end.max()) if len(end) else 0
    length = min(last, horizon) + 1
    new_inf = np.bincount(np.minimum(start, length), minlength=length + 1)[:length]
    new_rec = np.bincount(np.minimum(end, length), minlength=length + 1)[:length]
    ever = np.cumsum(new_inf)
    R = np.cumsum(new_rec)
    I = ever - R
    S = n - ever
    return SirTrace(S.astype(float), I.astype(float), R.astype(float), meta={"seed": params.seed, "run": run})


def sir_ensemble(g: Graph, params: SirParams, runs: int = 100, reference: Graph | None = None, workers: int = 1) -> SirTrace:
    """Mean trace over ``runs`` realisations (run ``r`` uses stream ``[seed, r]``).

    Shorter traces are padded with their final state before averaging.
    """
    if runs < 1:
        raise InvalidParam("runs must be at least 1")
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            traces = list(pool.map(lambda r: sir_run(g, params, r, reference), range(runs)))
    else:
        traces = [sir_run(g, params, r, reference) for r in range(runs)]
    length = max(len(t.S) for t in traces)
    traces = [t.padded(length) for t in traces]
    S = np.vstack([t.S for t in traces])
    I = np.vstack([t.I for t in traces])
    R = np.vstack([t.R for t in traces])
    meta = {"seed": params.seed, "runs": runs, "beta": params.beta, "gamma": params.gamma,
            "initial_infected": params.initial_infected if isinstance(params.initial_infected, int) else list(params.initial_infected)}
    return SirTrace(S.mean(0), I.mean(0), R.mean(0), I.std(0), R.std(0), meta)
