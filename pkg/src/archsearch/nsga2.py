"""NSGA-II with 2-point crossover, per-variable mutation, binary tournaments."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .benchmark import Evaluator
from .local_search import ALGO_SEED_TAGS
from .pareto import ObjectiveVector
from .populations import Individual, Population, init_population, mutate
from .runlog import BudgetExhausted, RunLog, RunRecorder
from .spaces import SearchSpace, Genotype, count_distinct_architectures


def non_dominated_sort(vectors: Sequence[ObjectiveVector]) -> list[list[int]]:
    """Partition indices into fronts: F1 = maxima, F2 = maxima of the rest, ..."""
    f = np.asarray(vectors, dtype=float)
    n = len(f)
    if n == 0:
        return []
    ge = (f[:, None, :] >= f[None, :, :]).all(axis=-1)
    ne = (f[:, None, :] != f[None, :, :]).any(axis=-1)
    dom = ge & ne  # dom[i, j]: i dominates j
    counts = dom.sum(axis=0)
    fronts: list[list[int]] = []
    current = np.flatnonzero(counts == 0)
    while current.size:
        fronts.append([int(i) for i in current])
        counts = counts - dom[current].sum(axis=0)
        counts[current] = -1
        current = np.flatnonzero(counts == 0)
    return fronts


def crowding_distance(front_vectors: Sequence[ObjectiveVector]) -> list[float]:
    """Per-member crowding; boundaries get +inf, zero-range objectives add 0."""
    n = len(front_vectors)
    if n == 0:
        raise ValueError("front must be nonempty")
    dist = np.zeros(n)
    f = np.asarray(front_vectors, dtype=float)
    for obj in range(f.shape[1]):
        order = np.argsort(f[:, obj], kind="stable")
        lo, hi = f[order[0], obj], f[order[-1], obj]
        dist[order[0]] = dist[order[-1]] = np.inf
        if hi > lo:
            gaps = (f[order[2:], obj] - f[order[:-2], obj]) / (hi - lo)
            dist[order[1:-1]] += gaps
    return [float(d) for d in dist]


def rank_and_crowd(vectors: Sequence[ObjectiveVector]) -> tuple[list[int], list[float]]:
    ranks = [0] * len(vectors)
    crowd = [0.0] * len(vectors)
    for r, front in enumerate(non_dominated_sort(vectors)):
        dists = crowding_distance([vectors[i] for i in front])
        for i, d in zip(front, dists):
            ranks[i] = r
            crowd[i] = d
    return ranks, crowd


def environmental_select(vectors: Sequence[ObjectiveVector], target: int) -> list[int]:
    """Truncate by rank, breaking ties on the boundary front by crowding."""
    survivors: list[int] = []
    for front in non_dominated_sort(vectors):
        if len(survivors) + len(front) <= target:
            survivors.extend(front)
            continue
        dists = crowding_distance([vectors[i] for i in front])
        order = sorted(range(len(front)), key=lambda k: (-dists[k], front[k]))
        survivors.extend(front[k] for k in order[: target - len(survivors)])
        break
    return survivors


def two_point_crossover(rng: np.random.Generator, a: Genotype, b: Genotype) -> tuple[Genotype, Genotype]:
    ell = len(a)
    lo, hi = sorted(int(c) for c in rng.integers(0, ell + 1, size=2))
    child_a = a[:lo] + b[lo:hi] + a[hi:]
    child_b = b[:lo] + a[lo:hi] + b[hi:]
    return child_a, child_b


def _tournament(rng: np.random.Generator, ranks: list[int], crowd: list[float]) -> int:
    i, j = (int(x) for x in rng.integers(0, len(ranks), size=2))
    if (ranks[i], -crowd[i]) < (ranks[j], -crowd[j]):
        return i
    if (ranks[j], -crowd[j]) < (ranks[i], -crowd[i]):
        return j
    return i if rng.random() < 0.5 else j


def run_nsga2(space: SearchSpace, evaluator: Evaluator, budget: int, seed: int,
              snapshot_points=None, population_size: int = 100,
              crossover_probability: float = 1.0, mutation_rate: float | None = None,
              stall_limit: int = 50, run_id: str | None = None) -> RunLog:
    rng = np.random.default_rng([ALGO_SEED_TAGS["nsga2"], seed])
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
            vectors = [m.vector for m in pop.members]
            ranks, crowd = rank_and_crowd(vectors)
            offspring: list[Individual] = []
            while len(offspring) < population_size:
                p1 = pop.members[_tournament(rng, ranks, crowd)]
                p2 = pop.members[_tournament(rng, ranks, crowd)]
                if rng.random() < crossover_probability:
                    c1, c2 = two_point_crossover(rng, p1.genotype, p2.genotype)
                else:
                    c1, c2 = p1.genotype, p2.genotype
                for child in (c1, c2):
                    child = mutate(space, rng, child, p_m)
                    res = recorder.evaluate(child)
                    offspring.append(Individual(child, res.vector))
            combined = pop.members + offspring
            keep = environmental_select([m.vector for m in combined], population_size)
            pop = Population([combined[i] for i in keep], pop.generation + 1)
            stall = stall + 1 if recorder.unique_count == before else 0
            if stall >= stall_limit:
                truncated = True
                break
    except BudgetExhausted:
        pass
    return recorder.finish(run_id or f"nsga2_s{seed}", "nsga2", seed, "multi", truncated)
