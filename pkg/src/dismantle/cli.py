"""``dismantle`` command line.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .benchmark import make_plan, run_benchmark
from .config import STRATEGIES, RunConfig, StrategySpec, child_seed
from .errors import ConfigError, DataError, DismantleError
from .epidemics import SirParams, sir_ensemble
from .evaluation import GccCurve, cfe, execute_plan, improvement
from .generators import TABLE_NETWORKS, GenSpec, build, table_network
from .graph import Graph, remove_edges
from .io import extract_gcc, load_edge_list, node_index, write_edge_list
from .plan import RemovalPlan

log = logging.getLogger("dismantle")


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


def _graph_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", "-i", help="edge-list file")
    src.add_argument("--network", choices=sorted(TABLE_NETWORKS), help="built-in synthetic network")
    p.add_argument("--graph-seed", type=int, default=0, help="generator seed for --network")
    p.add_argument("--no-gcc", action="store_true", help="use the whole graph, not its giant component")


def _graph(args) -> Graph:
    g = build(table_network(args.network, args.graph_seed)) if args.network else load_edge_list(args.input)
    return g if args.no_gcc else extract_gcc(g)


def _params(pairs: list[str] | None) -> dict:
    out = {}
    for item in pairs or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"expected key=value, got {item!r}")
        try:
            out[key] = json.loads(val)
        except json.JSONDecodeError:
            out[key] = val
    return out


def cmd_generate(args) -> int:
    if args.network:
        spec = table_network(args.network, args.seed)
    else:
        if not args.kind or not args.n:
            raise ConfigError("generate needs --network or both --kind and --n")
        spec = GenSpec(args.kind, args.n, _params(args.param), args.seed)
    g = build(spec)
    if args.gcc:
        g = extract_gcc(g)
    write_edge_list(g, args.output)
    print(f"{g.n} nodes, {g.m} edges, mean degree {2 * g.m / max(g.n, 1):.3f}", file=sys.stderr)
    return 0


def cmd_attack(args) -> int:
    g = _graph(args)
    seed = child_seed(args.seed, args.strategy, 0)
    plan, tree = make_plan(g, args.strategy, seed, _params(args.param), args.threshold, args.budget)
    _emit(plan.to_csv(g.labels), args.output)
    if args.tree and tree is not None:
        _emit("\n".join(tree.to_lines()) + "\n", args.tree)
    return 0


def _load_plan(g: Graph, path: str) -> RemovalPlan:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read plan {path}: {exc}") from exc
    return RemovalPlan.from_csv(text, g.m, node_index(g))


def cmd_curve(args) -> int:
    g = _graph(args)
    plan = _load_plan(g, args.plan)
    curve = execute_plan(g, plan, args.threshold)
    _emit(curve.to_csv(), args.output)
    return 0


def cmd_cfe(args) -> int:
    values = []
    for path in args.curves:
        try:
            values.append(cfe(GccCurve.from_csv(Path(path).read_text())))
        except OSError as exc:
            raise DataError(f"cannot read curve {path}: {exc}") from exc
    for path, f in zip(args.curves, values):
        line = f"{path}\t{f:.6f}"
        if args.baseline is not None:
            line += f"\t{100 * improvement(args.baseline, f):.1f}%"
        print(line)
    return 0


def cmd_sir(args) -> int:
    g = _graph(args)
    target = g
    if args.plan:
        plan = _load_plan(g, args.plan)
        if args.budget is not None:
            plan = plan.upto_cost(args.budget)
        target = remove_edges(g, plan.edges)
    params = SirParams(args.beta, args.gamma, args.initial, args.max_steps, args.seed)
    trace = sir_ensemble(target, params, args.runs, reference=g, workers=args.workers)
    _emit(trace.to_csv(), args.output)
    print(f"final size {trace.final_size:.1f} of {g.n}, peak at t={trace.peak_time}", file=sys.stderr)
    return 0


def cmd_report(args) -> int:
    if args.config:
        cfg = RunConfig.load(args.config)
        if args.output_dir:
            cfg.output_dir = args.output_dir
        if args.workers:
            cfg.workers = args.workers
    else:
        if not (args.input or args.network):
            raise ConfigError("report needs --config, --input or --network")
        inp = table_network(args.network, args.graph_seed) if args.network else args.input
        names = args.strategies.split(",") if args.strategies else list(STRATEGIES)
        specs = [StrategySpec(nm.strip(), runs=args.runs if nm.strip() in ("site", "bond") else None)
                 for nm in names]
        cfg = RunConfig(inp, specs, args.threshold, args.budget, args.output_dir, args.seed,
                        args.workers or 1, not args.no_gcc)
    report = run_benchmark(cfg)
    sys.stdout.write(report.to_table())
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dismantle", description="Network dismantling benchmark.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic network as an edge list")
    p.add_argument("--network", choices=sorted(TABLE_NETWORKS))
    p.add_argument("--kind", choices=["ER", "SF", "SBM"])
    p.add_argument("--n", type=int)
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="generator parameter, repeatable")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gcc", action="store_true", help="keep only the giant component")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("attack", help="emit a removal plan as CSV")
    _graph_args(p)
    p.add_argument("--strategy", "-s", choices=STRATEGIES, required=True)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.01)
    p.add_argument("--budget", type=float)
    p.add_argument("--tree", help="write the HPI-Ncut partition tree here")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("curve", help="execute a plan and write the GCC curve")
    _graph_args(p)
    p.add_argument("--plan", "-p", required=True)
    p.add_argument("--threshold", type=float, default=0.01)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("cfe", help="integrate curve CSVs")
    p.add_argument("curves", nargs="+")
    p.add_argument("--baseline", type=float, help="baseline CFE for the improvement column")
    p.set_defaults(func=cmd_cfe)

    p = sub.add_parser("sir", help="SIR ensemble, optionally after immunizing by a plan")
    _graph_args(p)
    p.add_argument("--plan", "-p")
    p.add_argument("--budget", type=float, help="apply only the plan prefix up to this edge fraction")
    p.add_argument("--beta", type=float, default=0.10)
    p.add_argument("--gamma", type=float, default=0.02)
    p.add_argument("--initial", type=int, default=1)
    p.add_argument("--max-steps", type=int, default=2000)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_sir)

    p = sub.add_parser("report", help="full benchmark: plans, curves, CFE table")
    p.add_argument("--config", "-c", help="JSON or YAML run config")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", "-i")
    src.add_argument("--network", choices=sorted(TABLE_NETWORKS))
    p.add_argument("--graph-seed", type=int, default=0)
    p.add_argument("--no-gcc", action="store_true")
    p.add_argument("--strategies", help="comma-separated, default all")
    p.add_argument("--runs", type=int, default=100, help="ensemble size for site/bond")
    p.add_argument("--threshold", type=float, default=0.01)
    p.add_argument("--budget", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)
    p.add_argument("--output-dir", "-o")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except DismantleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DataError.exit_code


if __name__ == "__main__":
    sys.exit(main())
