"""Random search and random-restart scalarized local search.

One restart of local search: evaluate a uniform start, draw a scalarization
weight, then visit all variables in a fresh random order, trying every
alternative symbol per variable and keeping the scalarized best. Exactly one
pass per restart; the incumbent wins ties, then the lowest symbol index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .benchmark import Evaluator
from .pareto import scalarize
from .runlog import BudgetExhausted, RunLog, RunRecorder
from .spaces import (
    SearchSpace,
    Genotype,
    count_distinct_architectures,
    random_genotype,
    seed_genotype,
)

ALGO_SEED_TAGS = {"rs": 101, "ls": 102, "nsga2": 103, "mogomea": 104, "ga": 105, "gomea": 106}


@dataclass(frozen=True)
class LocalSearchConfig:
    mode: str = "multi"  # "multi" draws alpha per restart; "single" fixes alpha = 1
    budget: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("multi", "single"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")


def run_random_search(space: SearchSpace, evaluator: Evaluator, budget: int, seed: int,
                      snapshot_points=None, mode: str = "multi",
                      run_id: str | None = None) -> RunLog:
    rng = np.random.default_rng([ALGO_SEED_TAGS["rs"], seed])
    recorder = RunRecorder(evaluator, budget, snapshot_points)
    cap = count_distinct_architectures(space)
    truncated = False
    try:
        recorder.evaluate(seed_genotype(space))
        while True:
            if recorder.unique_count >= cap:
                truncated = recorder.unique_count < budget
                break
            recorder.evaluate(random_genotype(space, rng))
    except BudgetExhausted:
        pass
    return recorder.finish(run_id or f"rs_s{seed}", "rs", seed, mode, truncated)


def local_search_pass(space: SearchSpace, recorder: RunRecorder, rng: np.random.Generator,
                      alpha: float, start: Genotype, start_value: float) -> tuple[Genotype, float]:
    """Single sweep over all variables in a fresh random order.

    Per variable, every alternative symbol is evaluated and the scalarized
    best kept; the incumbent wins ties, then the lowest symbol index. The
    kept value is carried forward, so the start plus the alternatives bound
    the pass at 1 + sum(|alphabet_i| - 1) new unique evaluations.
    """
    current = list(start)
    current_value = start_value
    for i in rng.permutation(space.length):
        best_symbol = current[i]
        best_value = current_value
        for s in range(space.alphabet_sizes[i]):
            if s == current[i]:
                continue
            candidate = list(current)
            candidate[i] = s
            value = scalarize(alpha, recorder.evaluate(tuple(candidate)).vector)
            if value > best_value:
                best_symbol, best_value = s, value
        current[i] = best_symbol
        current_value = best_value
    return tuple(current), current_value


def local_search_restart(space: SearchSpace, recorder: RunRecorder,
                         rng: np.random.Generator, alpha: float) -> tuple[Genotype, float]:
    """One restart: evaluate a uniform-random start, then one variable sweep."""
    start = random_genotype(space, rng)
    res = recorder.evaluate(start)
    return local_search_pass(space, recorder, rng, alpha, start, scalarize(alpha, res.vector))


def run_local_search(space: SearchSpace, evaluator: Evaluator, config: LocalSearchConfig,
                     snapshot_points=None, run_id: str | None = None) -> RunLog:
    rng = np.random.default_rng([ALGO_SEED_TAGS["ls"], config.seed])
    recorder = RunRecorder(evaluator, config.budget, snapshot_points)
    cap = count_distinct_architectures(space)
    truncated = False
    try:
        recorder.evaluate(seed_genotype(space))
        while True:
            if recorder.unique_count >= cap:
                truncated = recorder.unique_count < config.budget
                break
            alpha = 1.0 if config.mode == "single" else float(rng.uniform())
            local_search_restart(space, recorder, rng, alpha)
    except BudgetExhausted:
        pass
    return recorder.finish(
        run_id or f"ls_s{config.seed}", "ls", config.seed, config.mode, truncated
    )
