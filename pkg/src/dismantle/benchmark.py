"""Benchmark pipeline: build plans, execute them, integrate curves, write reports."""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .config import RANDOMIZED, RunConfig, StrategySpec, child_seed
from .errors import DismantleError, InvalidParam
from .evaluation import GccCurve, absolute_gap, average_curves, cfe, execute_plan, improvement
from .generators import GenSpec, build
from .graph import Graph
from .io import extract_gcc, load_edge_list
from .plan import RemovalPlan
from .spectral import PartitionTree, SpectralConfig, hpi_ncut
from .strategies import (
    bond_percolation_plan,
    ci_plan,
    corehd_plan,
    edge_betweenness_plan,
    hd_plan,
    hda_plan,
    site_percolation_plan,
)

log = logging.getLogger(__name__)

TABLE_ORDER = ("site", "hd", "hda", "ci", "corehd", "bond", "betweenness", "hpi-ncut")
COLUMN = {
    "site": "P_site",
    "bond": "P_bond",
    "hd": "HD",
    "hda": "HDA",
    "ci": "CI",
    "corehd": "CoreHD",
    "betweenness": "Betw",
    "hpi-ncut": "HPI-Ncut",
}


def _spectral_config(params: dict, seed: int, threshold: float, budget: float | None) -> SpectralConfig:
    known = {"eta_exponent", "eta_override", "k_per_level", "balanced", "deflation", "median_fallback"}
    extra = set(params) - known
    if extra:
        raise InvalidParam(f"hpi-ncut: unknown parameters {sorted(extra)}")
    return SpectralConfig(gcc_threshold=threshold, budget=budget, seed=seed, **params)


def make_plan(g: Graph, name: str, seed: int = 0, params: dict | None = None,
              threshold: float = 0.01, budget: float | None = None) -> tuple[RemovalPlan, PartitionTree | None]:
    """Dispatch a strategy by name; node strategies ignore ``seed``."""
    params = dict(params or {})
    tree = None
    if name == "site":
        plan = site_percolation_plan(g, seed)
    elif name == "bond":
        plan = bond_percolation_plan(g, seed)
    elif name == "hd":
        plan = hd_plan(g)
    elif name == "hda":
        plan = hda_plan(g)
    elif name == "ci":
        plan = ci_plan(g, int(params.get("radius", 3)))
    elif name == "corehd":
        plan = corehd_plan(g, params.get("core_degree", "residual"))
    elif name == "betweenness":
        plan = edge_betweenness_plan(g, params.get("recompute_interval"))
    elif name == "hpi-ncut":
        tree, plan = hpi_ncut(g, _spectral_config(params, seed, threshold, budget))
    else:
        raise InvalidParam(f"unknown strategy {name!r}")
    if budget is not None and name != "hpi-ncut":
        plan = plan.upto_cost(budget)
    return plan, tree


@dataclass
class StrategyResult:
    name: str
    cfe: float
    runs: int
    seeds: list[int]
    improvement: float | None = None
    gap: float | None = None
    cost: float = 0.0  # mean removed edge fraction when execution stopped
    curve: GccCurve | None = field(default=None, repr=False)
    tree: PartitionTree | None = field(default=None, repr=False)
    plan: RemovalPlan | None = field(default=None, repr=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "cfe": self.cfe,
            "improvement": self.improvement,
            "absolute_gap": self.gap,
            "runs": self.runs,
            "seeds": self.seeds,
            "final_cost": self.cost,
        }


@dataclass
class CfeReport:
    network: dict[str, Any]
    results: list[StrategyResult]
    meta: dict[str, Any]

    def result(self, name: str) -> StrategyResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def cfe(self) -> dict[str, float]:
        return {r.name: r.cfe for r in self.results}

    def to_dict(self) -> dict[str, Any]:
        return {"network": self.network, "strategies": [r.to_dict() for r in self.results], "meta": self.meta}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        """Two aligned rows mirroring the CFE and improvement tables."""
        names = [r.name for r in self.results]
        cols = [COLUMN.get(nm, nm) for nm in names]
        width = max(10, *(len(c) + 2 for c in cols))
        label = self.network.get("name", "network")
        lw = max(len(label), len("Improvement")) + 2
        head = "CFE".ljust(lw) + "".join(c.rjust(width) for c in cols)
        row = label.ljust(lw) + "".join(f"{r.cfe:.3f}".rjust(width) for r in self.results)
        imp_cols = [c for r, c in zip(self.results, cols) if r.name != "site"]
        imp_head = "Improvement".ljust(lw) + "".join(c.rjust(width) for c in imp_cols)
        imp = []
        for r in self.results:
            if r.name == "site":
                continue
            imp.append("n/a" if r.improvement is None else f"{round(100 * r.improvement):d}%")
        imp_row = label.ljust(lw) + "".join(v.rjust(width) for v in imp)
        return "\n".join([head, row, "", imp_head, imp_row]) + "\n"


def load_network(source: str | GenSpec, gcc: bool = True) -> tuple[Graph, dict[str, Any]]:
    if isinstance(source, GenSpec):
        g = build(source)
        info: dict[str, Any] = {"name": source.kind, "generator": source.to_dict()}
    else:
        g = load_edge_list(source)
        info = {"name": Path(source).stem, "path": str(source)}
    if gcc:
        g = extract_gcc(g)
    info.update(nodes=g.n, edges=g.m, mean_degree=2 * g.m / g.n if g.n else 0.0)
    return g, info


def _ordered(strategies: list[StrategySpec]) -> list[StrategySpec]:
    rank = {nm: i for i, nm in enumerate(TABLE_ORDER)}
    return sorted(strategies, key=lambda s: rank.get(s.name, len(rank)))


def evaluate(g: Graph, strategies: list[StrategySpec], seed: int = 0, threshold: float = 0.01,
             budget: float | None = None, workers: int = 1,
             keep: bool = False) -> list[StrategyResult]:
    """Run every (strategy, run) task and reduce per strategy.

    Randomized strategies run ``spec.runs`` times with seeds derived from
    ``(seed, name, run)``; the site-percolation baseline is the CFE of the
    ensemble-mean curve. Output does not depend on ``workers``.
    """
    tasks: list[tuple[StrategySpec, int, int]] = []
    for spec in strategies:
        runs = spec.runs if spec.name in RANDOMIZED else 1
        for r in range(runs):
            tasks.append((spec, r, child_seed(seed, spec.name, r)))

    def work(task):
        spec, r, s = task
        try:
            plan, tree = make_plan(g, spec.name, s, spec.params, threshold, budget)
            curve = execute_plan(g, plan, threshold)
        except DismantleError as exc:
            raise type(exc)(f"{spec.name} (run {r}): {exc}") from exc
        return plan, tree, curve

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            outputs = list(pool.map(work, tasks))
    else:
        outputs = [work(t) for t in tasks]

    results = []
    for spec in strategies:
        idx = [i for i, t in enumerate(tasks) if t[0] is spec]
        curves = [outputs[i][2] for i in idx]
        mean = average_curves(curves)
        res = StrategyResult(spec.name, cfe(mean), len(idx), [tasks[i][2] for i in idx],
                             cost=float(np.mean([c.x[-1] for c in curves])), curve=mean)
        if keep:
            res.plan, res.tree = outputs[idx[0]][0], outputs[idx[0]][1]
        results.append(res)
    base = next((r for r in results if r.name == "site"), None)
    if base is not None:
        for r in results:
            if r is not base and base.cfe > 0:
                r.improvement = improvement(base.cfe, r.cfe)
                r.gap = absolute_gap(base.cfe, r.cfe)
    return results


def run_benchmark(config: RunConfig) -> CfeReport:
    """Full pipeline for one network; writes artifacts when ``output_dir`` is set."""
    g, info = load_network(config.input, config.gcc)
    strategies = list(config.strategies)
    added = False
    if not any(s.name == "site" for s in strategies):
        strategies.append(StrategySpec("site"))
        added = True
    strategies = _ordered(strategies)
    results = evaluate(g, strategies, config.seed, config.threshold, config.budget, config.workers, keep=True)
    meta = {
        "config": config.to_dict(),
        "threshold": config.threshold,
        "budget": config.budget,
        "master_seed": config.seed,
        "baseline": "site percolation, CFE of the ensemble-mean curve",
        "baseline_added": added,
        "improvement": "(F_site - F) / F_site",
    }
    report = CfeReport(info, results, meta)
    if config.output_dir is not None:
        write_report(report, config.output_dir, g)
    return report


def write_report(report: CfeReport, output_dir: str, g: Graph) -> None:
    out = Path(output_dir)
    (out / "curves").mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json())
    (out / "report.txt").write_text(report.to_table())
    for r in report.results:
        if r.curve is not None:
            (out / "curves" / f"{r.name}.csv").write_text(r.curve.to_csv())
        if r.tree is not None:
            (out / "hpi-ncut-tree.txt").write_text("\n".join(r.tree.to_lines()) + "\n")
        if r.plan is not None and r.runs == 1:
            (out / "plans").mkdir(exist_ok=True)
            (out / "plans" / f"{r.name}.csv").write_text(r.plan.to_csv(g.labels))
