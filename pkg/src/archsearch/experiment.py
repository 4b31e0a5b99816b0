"""Experiment configuration and repeated seeded runs."""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from .benchmark import (
    ENUMERATION_GUARD,
    Evaluator,
    ObjectiveSpec,
    SyntheticEvaluator,
    generate_synthetic,
    load_table,
)
from .ga import run_ga
from .gomea import run_gomea, run_mo_gomea
from .local_search import LocalSearchConfig, run_local_search, run_random_search
from .nsga2 import run_nsga2
from .runlog import RunLog, snapshot_schedule
from .spaces import SearchSpace, count_distinct_architectures, load_space

ALGORITHM_NAMES = ("rs", "ls", "nsga2", "mogomea", "ga", "gomea")
SINGLE_OBJECTIVE_CAPABLE = frozenset({"rs", "ls", "ga", "gomea"})
MULTI_OBJECTIVE_CAPABLE = frozenset({"rs", "ls", "nsga2", "mogomea"})

DEFAULT_PARAMS: dict[str, dict] = {
    "rs": {},
    "ls": {},
    "nsga2": {
        "population_size": 100,
        "crossover_probability": 1.0,
        "mutation_rate": None,  # None -> 1/length
        "stall_limit": 50,
    },
    "ga": {"population_size": 100, "mutation_rate": None, "stall_limit": 50},
    "mogomea": {
        "ims_base_population": 8,
        "ims_interleave": 4,
        "cluster_count": 5,
        "stall_limit": 50,
    },
    "gomea": {"ims_base_population": 8, "ims_interleave": 4, "stall_limit": 50},
}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class SyntheticSpec:
    seed: int
    ruggedness: float


@dataclass
class ExperimentConfig:
    space: str
    algorithm: str
    budget: int
    mode: str = "multi"
    repetitions: int = 1
    base_seed: int = 0
    table: Optional[str] = None
    synthetic: Optional[SyntheticSpec] = None
    snapshots: Optional[list[int]] = None
    complexity_min: Optional[float] = None
    complexity_max: Optional[float] = None
    params: dict = field(default_factory=dict)
    output_dir: str = "runs"

    def validate(self) -> None:
        if self.algorithm not in ALGORITHM_NAMES:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.mode not in ("multi", "single"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == "single" and self.algorithm not in SINGLE_OBJECTIVE_CAPABLE:
            raise ConfigError(f"{self.algorithm} does not support single-objective mode")
        if self.mode == "multi" and self.algorithm not in MULTI_OBJECTIVE_CAPABLE:
            raise ConfigError(f"{self.algorithm} does not support multi-objective mode")
        if self.budget < 1:
            raise ConfigError("budget must be >= 1")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if (self.table is None) == (self.synthetic is None):
            raise ConfigError("exactly one of table / synthetic must be given")
        if self.snapshots is not None and any(
            p < 1 or p > self.budget for p in self.snapshots
        ):
            raise ConfigError("snapshot points must lie in [1, budget]")
        unknown = set(self.params) - set(DEFAULT_PARAMS[self.algorithm])
        if unknown:
            raise ConfigError(f"unknown parameters for {self.algorithm}: {sorted(unknown)}")

    def resolved_params(self) -> dict:
        return {**DEFAULT_PARAMS[self.algorithm], **self.params}

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.synthetic is not None:
            d["synthetic"] = asdict(self.synthetic)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        if d.get("synthetic") is not None:
            d["synthetic"] = SyntheticSpec(
                seed=int(d["synthetic"]["seed"]),
                ruggedness=float(d["synthetic"]["ruggedness"]),
            )
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def save_json(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def config_hash(config: ExperimentConfig) -> str:
    payload = json.dumps(config.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:12]


def build_evaluator(config: ExperimentConfig, space: SearchSpace) -> Evaluator:
    if config.table is not None:
        evaluator: Evaluator = load_table(config.table, space)
    else:
        assert config.synthetic is not None
        if count_distinct_architectures(space) <= ENUMERATION_GUARD:
            evaluator = generate_synthetic(
                space, config.synthetic.seed, config.synthetic.ruggedness
            )
        else:
            evaluator = SyntheticEvaluator(
                space, config.synthetic.seed, config.synthetic.ruggedness
            )
    if config.complexity_min is not None or config.complexity_max is not None:
        spec = evaluator.objective_spec
        evaluator.objective_spec = ObjectiveSpec(
            config.complexity_min if config.complexity_min is not None else spec.complexity_min,
            config.complexity_max if config.complexity_max is not None else spec.complexity_max,
            spec.complexity_kind,
        )
    return evaluator


def dispatch_run(algorithm: str, space: SearchSpace, evaluator: Evaluator, budget: int,
                 seed: int, mode: str, snapshot_points, params: dict,
                 run_id: Optional[str] = None) -> RunLog:
    if algorithm == "rs":
        return run_random_search(space, evaluator, budget, seed, snapshot_points,
                                 mode=mode, run_id=run_id)
    if algorithm == "ls":
        cfg = LocalSearchConfig(mode=mode, budget=budget, seed=seed)
        return run_local_search(space, evaluator, cfg, snapshot_points, run_id=run_id)
    if algorithm == "nsga2":
        return run_nsga2(space, evaluator, budget, seed, snapshot_points,
                         run_id=run_id, **params)
    if algorithm == "mogomea":
        return run_mo_gomea(space, evaluator, budget, seed, snapshot_points,
                            run_id=run_id, **params)
    if algorithm == "ga":
        return run_ga(space, evaluator, budget, seed, snapshot_points,
                      run_id=run_id, **params)
    if algorithm == "gomea":
        return run_gomea(space, evaluator, budget, seed, snapshot_points,
                         run_id=run_id, **params)
    raise ConfigError(f"unknown algorithm {algorithm!r}")


_EVALUATOR_CACHE: dict[str, tuple[SearchSpace, Evaluator]] = {}


def _cached_inputs(config: ExperimentConfig) -> tuple[SearchSpace, Evaluator]:
    key = json.dumps(
        {
            "space": config.space,
            "table": config.table,
            "synthetic": asdict(config.synthetic) if config.synthetic else None,
            "complexity_min": config.complexity_min,
            "complexity_max": config.complexity_max,
        },
        sort_keys=True,
    )
    if key not in _EVALUATOR_CACHE:
        space = load_space(config.space)
        _EVALUATOR_CACHE[key] = (space, build_evaluator(config, space))
    return _EVALUATOR_CACHE[key]


def _execute_run(config_dict: dict, repetition: int) -> str:
    config = ExperimentConfig.from_dict(config_dict)
    space, evaluator = _cached_inputs(config)
    seed = config.base_seed + repetition
    run_id = f"{config.algorithm}_s{seed}"
    points = snapshot_schedule(config.budget, config.snapshots)
    log = dispatch_run(config.algorithm, space, evaluator, config.budget, seed,
                       config.mode, points, config.resolved_params(), run_id)
    log.save(config.output_dir)
    return run_id


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[RunLog]:
    """Execute repetitions with seeds base_seed + r; logs land in output_dir."""
    config.validate()
    os.makedirs(config.output_dir, exist_ok=True)
    resolved = config.to_dict()
    resolved["params"] = config.resolved_params()
    resolved["config_hash"] = config_hash(config)
    path = os.path.join(config.output_dir, f"config_{config.algorithm}.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(resolved, fh, indent=2, sort_keys=True)
        fh.write("\n")

    reps = range(config.repetitions)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            run_ids = list(pool.map(_execute_run, [config.to_dict()] * config.repetitions, reps))
    else:
        run_ids = [_execute_run(config.to_dict(), r) for r in reps]
    return [RunLog.load(config.output_dir, rid) for rid in run_ids]
