"""Run configuration for the benchmark pipeline (JSON or YAML files)."""
from __future__ import annotations

import json
import os
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ConfigError, InvalidParam
from .generators import GenSpec, table_network

STRATEGIES = ("site", "bond", "hd", "hda", "ci", "corehd", "betweenness", "hpi-ncut")
RANDOMIZED = ("site", "bond", "hpi-ncut")
DEFAULT_RUNS = {"site": 100, "bond": 100}


def child_seed(master: int, name: str, index: int = 0) -> int:
    """Seed derived from ``(master, name, index)``; independent of other names."""
    ss = np.random.SeedSequence([int(master) & 0xFFFFFFFF, zlib.crc32(name.encode()), int(index)])
    return int(ss.generate_state(1, dtype=np.uint32)[0])


@dataclass
class StrategySpec:
    name: str
    params: dict[str, Any] = field(default_factory=dict)
    runs: int | None = None

    def __post_init__(self):
        if self.name not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.name!r}; choose from {', '.join(STRATEGIES)}")
        if self.runs is None:
            self.runs = DEFAULT_RUNS.get(self.name, 1)
        if self.runs < 1:
            raise ConfigError(f"{self.name}: runs must be at least 1")

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "params": dict(self.params), "runs": self.runs}


@dataclass
class RunConfig:
    """One benchmark run.

    ``input`` is either an edge-list path or a :class:`GenSpec`. Experiments
    run on the giant component of the input unless ``gcc`` is false.
    """

    input: str | GenSpec
    strategies: list[StrategySpec]
    threshold: float = 0.01
    budget: float | None = None
    output_dir: str | None = None
    seed: int = 0
    workers: int = 1
    gcc: bool = True

    def __post_init__(self):
        if not self.strategies:
            raise ConfigError("at least one strategy is required")
        if not 0 < self.threshold <= 1:
            raise ConfigError("threshold must lie in (0, 1]")
        if self.budget is not None and not 0 <= self.budget <= 1:
            raise ConfigError("budget must lie in [0, 1]")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if isinstance(self.input, (str, os.PathLike)) and not Path(self.input).is_file():
            raise ConfigError(f"input file {self.input} does not exist")

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RunConfig":
        try:
            src = d["input"]
            if isinstance(src, dict):
                if "network" in src:
                    inp: str | GenSpec = table_network(src["network"], int(src.get("seed", 0)))
                elif "path" in src:
                    inp = str(src["path"])
                else:
                    inp = GenSpec.from_dict(src)
            else:
                inp = str(src)
            strategies = []
            for s in d["strategies"]:
                if isinstance(s, str):
                    strategies.append(StrategySpec(s))
                else:
                    strategies.append(StrategySpec(s["name"], dict(s.get("params", {})), s.get("runs")))
            return cls(
                input=inp,
                strategies=strategies,
                threshold=float(d.get("threshold", 0.01)),
                budget=None if d.get("budget") is None else float(d["budget"]),
                output_dir=d.get("output_dir"),
                seed=int(d.get("seed", 0)),
                workers=int(d.get("workers", 1)),
                gcc=bool(d.get("gcc", True)),
            )
        except (KeyError, TypeError, ValueError, InvalidParam) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid run config: {exc}") from exc

    @classmethod
    def load(cls, path: str | os.PathLike) -> "RunConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file {path} does not exist")
        text = path.read_text()
        try:
            if path.suffix in (".yaml", ".yml"):
                import yaml

                data = yaml.safe_load(text)
            else:
                data = json.loads(text)
        except Exception as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        # relative input paths resolve against the config file's directory
        if isinstance(data, dict):
            src = data.get("input")
            rel = src.get("path") if isinstance(src, dict) else src
            if isinstance(rel, str) and not Path(rel).is_absolute() and (path.parent / rel).is_file():
                full = str(path.parent / rel)
                data["input"] = dict(src, path=full) if isinstance(src, dict) else full
        return cls.from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        inp = self.input.to_dict() if isinstance(self.input, GenSpec) else {"path": str(self.input)}
        return {
            "input": inp,
            "strategies": [s.to_dict() for s in self.strategies],
            "threshold": self.threshold,
            "budget": self.budget,
            "seed": self.seed,
            "gcc": self.gcc,
        }
