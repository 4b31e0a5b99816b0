"""Single-objective GA: uniform crossover, merged-pool size-2 tournaments."""

from __future__ import annotations

import numpy as np

from .benchmark import Evaluator
from .local_search import ALGO_SEED_TAGS
from .populations import Individual, Population, init_population, mutate
from .runlog import BudgetExhausted, RunLog, RunRecorder
from .spaces import SearchSpace, Genotype, count_distinct_architectures


def uniform_crossover(rng: np.random.Generator, a: Genotype, b: Genotype) -> tuple[Genotype, Genotype]:
    mask = rng.random(len(a)) < 0.5
    child_a = tuple(x if m else y for x, y, m in zip(a, b, mask))
    child_b = tuple(y if m else x for x, y, m in zip(a, b, mask))
    return child_a, child_b


def _merged_pool_tournaments(rng: np.random.Generator, members: list[Individual],
                             survivors: int) -> list[Individual]:
    """Repeated size-2 tournaments; winners leave the pool, ties split randomly."""
    pool = list(members)
    chosen: list[Individual] = []
    while len(chosen) < survivors:
        i, j = (int(x) for x in rng.choice(len(pool), size=2, replace=False))
        fi, fj = pool[i].fitness, pool[j].fitness
        if fi > fj:
            win = i
        elif fj > fi:
            win = j
        else:
            win = i if rng.random() < 0.5 else j
        chosen.append(pool.pop(win))
    return chosen


def run_ga(space: SearchSpace, evaluator: Evaluator, budget: int, seed: int,
           snapshot_points=None, population_size: int = 100,
           mutation_rate: float | None = None, stall_limit: int = 50,
           run_id: str | None = None) -> RunLog:
    rng = np.random.default_rng([ALGO_SEED_TAGS["ga"], seed])
    recorder = RunRecorder(evaluator, budget, snapshot_points)
    cap = count_distinct_architectures(space)
    p_m = (1.0 / space.length) if mutation_rate is None else mutation_rate
    truncated = False
    try:
        pop = init_population(space, recorder, rng, population_size)
        stall = 0
        while True:
            if recorder.unique_count >= cap:
                truncated = recorder.unique_count < budget
                break
            before = recorder.unique_count
            perm = [int(i) for i in rng.permutation(population_size)]
            offspring: list[Individual] = []
            for k in range(0, population_size - 1, 2):
                p1 = pop.members[perm[k]]
                p2 = pop.members[perm[k + 1]]
                for child in uniform_crossover(rng, p1.genotype, p2.genotype):
                    child = mutate(space, rng, child, p_m)
                    res = recorder.evaluate(child)
                    offspring.append(Individual(child, res.vector))
            if population_size % 2:
                lone = pop.members[perm[-1]]
                child = mutate(space, rng, lone.genotype, p_m)
                res = recorder.evaluate(child)
                offspring.append(Individual(child, res.vector))
            merged = pop.members + offspring
            pop = Population(_merged_pool_tournaments(rng, merged, population_size),
                             pop.generation + 1)
            stall = stall + 1 if recorder.unique_count == before else 0
            if stall >= stall_limit:
                truncated = True
                break
    except BudgetExhausted:
        pass
    return recorder.finish(run_id or f"ga_s{seed}", "ga", seed, "single", truncated)
