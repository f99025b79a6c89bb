"""GCC-versus-cost curves and the cost-fragmentation effectiveness (CFE)."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._kernels import replay_gcc
from .errors import InvalidParam, ParseError, ZeroBaseline
from .graph import Graph, gcc_fraction
from .plan import RemovalPlan

__all__ = ["GccCurve", "execute_plan", "cfe", "improvement", "absolute_gap", "average_curves"]

DEFAULT_THRESHOLD = 0.01


@dataclass
class GccCurve:
    """Right-continuous step function from removal cost to GCC node fraction.

    ``f(x)`` is the value at the largest breakpoint ``<= x``; after the last
    breakpoint the curve holds its final value up to ``x = 1``. ``std`` is set
    on averaged curves only.
    """

    x: np.ndarray
    f: np.ndarray
    std: np.ndarray | None = None

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.f = np.asarray(self.f, dtype=float)

    @classmethod
    def from_points(cls, points: Sequence[tuple[float, float]]) -> "GccCurve":
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return cls(pts[:, 0], pts[:, 1])

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.f.tolist()))

    def __call__(self, x) -> np.ndarray:
        idx = np.searchsorted(self.x, x, side="right") - 1
        return self.f[np.clip(idx, 0, None)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "f_mean", "f_std"])
        std = self.std if self.std is not None else np.zeros_like(self.f)
        for x, f, s in zip(self.x, self.f, std):
            w.writerow([repr(float(x)), repr(float(f)), repr(float(s))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "GccCurve":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0][:2] != ["x", "f_mean"]:
            raise ParseError("missing curve header", 1)
        data = []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            try:
                data.append([float(v) for v in row[:3]] + [0.0] * (3 - len(row[:3])))
            except ValueError:
                raise ParseError(f"bad curve row {row!r}", lineno) from None
        arr = np.array(data, dtype=float).reshape(-1, 3)
        return cls(arr[:, 0], arr[:, 1], arr[:, 2])


def execute_plan(g: Graph, plan: RemovalPlan, threshold: float = DEFAULT_THRESHOLD) -> GccCurve:
    """Apply the plan batch by batch and record ``(cost, GCC fraction)``.

    Fractions are relative to ``g.n``. Execution stops after the first batch
    that pushes the GCC fraction below ``threshold``. Empty batches add no
    breakpoint.
    """
    plan.validate(g)
    if g.n == 0:
        return GccCurve([0.0], [0.0])
    keys_all = g.edge_keys()
    nn = max(g.n, 1)
    plan_keys = plan.edges[:, 0] * nn + plan.edges[:, 1]
    survivors = g.edges()[~np.isin(keys_all, plan_keys)]
    sizes = replay_gcc(g.n, survivors, plan.edges, plan.offsets)

    frac = sizes / g.n
    nonempty = plan.batch_sizes > 0
    costs = plan.cumulative_costs()
    below = np.flatnonzero(nonempty & (frac < threshold))
    stop = below[0] + 1 if len(below) else len(plan)
    keep = np.flatnonzero(nonempty[:stop])
    x = np.concatenate([[0.0], costs[keep]])
    f = np.concatenate([[gcc_fraction(g)], frac[keep]])
    return GccCurve(x, f)


def cfe(curve: GccCurve) -> float:
    """Exact area under the step curve on ``[0, 1]``."""
    x = np.append(curve.x, 1.0)
    return float(np.sum(np.diff(x) * curve.f))


def improvement(f_star: float, f_d: float) -> float:
    """Relative CFE gain over the baseline: ``(f_star - f_d) / f_star``."""
    if f_star <= 0:
        raise ZeroBaseline("baseline CFE must be positive")
    return (f_star - f_d) / f_star


def absolute_gap(f_star: float, f_d: float) -> float:
    return f_star - f_d


def average_curves(curves: Sequence[GccCurve]) -> GccCurve:
    """Pointwise mean and standard deviation over the union of breakpoints."""
    if not curves:
        raise InvalidParam("need at least one curve")
    if len(curves) == 1:
        c = curves[0]
        return GccCurve(c.x.copy(), c.f.copy(), np.zeros_like(c.f))
    xs = np.unique(np.concatenate([c.x for c in curves]))
    vals = np.vstack([c(xs) for c in curves])
    return GccCurve(xs, vals.mean(axis=0), vals.std(axis=0))
