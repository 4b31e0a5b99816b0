"""Gene-pool optimal mixing EAs with the interleaved multi-start scheme.

Populations of doubling size (8, 16, 32, ...) evolve interleaved: a
population runs four generations for every one generation of the next
larger, which is created once its predecessor has completed four. A
population retires once converged, or once a larger population out-
contributes it to the archive over their last two generations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .benchmark import Evaluator
from .linkage import cluster_population, learn_linkage_tree
from .local_search import ALGO_SEED_TAGS
from .pareto import dominates
from .populations import Individual, Population, init_population
from .runlog import BudgetExhausted, RunLog, RunRecorder
from .spaces import SearchSpace, Genotype, count_distinct_architectures


@dataclass
class _ImsEntry:
    population: Population
    generations: int = 0
    recent: deque = field(default_factory=lambda: deque(maxlen=2))


def _run_ims(recorder: RunRecorder, budget: int, cap: int,
             make_population: Callable[[int], Population],
             step_population: Callable[[Population], None],
             base_size: int, interleave: int, stall_limit: int) -> bool:
    populations: list[_ImsEntry] = []
    next_size = base_size

    def create() -> None:
        nonlocal next_size
        populations.append(_ImsEntry(make_population(next_size)))
        next_size *= 2

    def advance(idx: int) -> None:
        entry = populations[idx]
        before = recorder.archive_accepted
        step_population(entry.population)
        entry.generations += 1
        entry.recent.append(recorder.archive_accepted - before)
        if entry.generations % interleave == 0:
            if idx + 1 == len(populations):
                create()
            advance(idx + 1)

    stall = 0
    while True:
        if recorder.unique_count >= cap:
            return recorder.unique_count < budget
        keep: list[_ImsEntry] = []
        for i, entry in enumerate(populations):
            retire = entry.population.converged()
            if not retire and entry.generations >= 2:
                mine = sum(entry.recent)
                for larger in populations[i + 1:]:
                    if larger.generations >= 2 and sum(larger.recent) > mine:
                        retire = True
                        break
            if not retire:
                keep.append(entry)
        populations[:] = keep
        if not populations:
            create()
        before_unique = recorder.unique_count
        advance(0)
        stall = stall + 1 if recorder.unique_count == before_unique else 0
        if stall >= stall_limit:
            return True


def _copy_subset(member: Individual, donor: Individual, subset: tuple[int, ...]) -> Genotype | None:
    """Donor's symbols over the subset, or None when nothing would change."""
    if all(donor.genotype[p] == member.genotype[p] for p in subset):
        return None
    cand = list(member.genotype)
    for p in subset:
        cand[p] = donor.genotype[p]
    return tuple(cand)


def gom_accepts(candidate_vector, member_vector, archived: bool,
                flagged_objectives: tuple[int, ...]) -> bool:
    """Mixing acceptance: dominate, tie, improve a flagged extreme objective,
    or enter the elitist archive. A kept change is never dominated by the
    solution it replaces."""
    return (
        dominates(candidate_vector, member_vector)
        or tuple(candidate_vector) == tuple(member_vector)
        or archived
        or any(candidate_vector[o] > member_vector[o] for o in flagged_objectives)
    )


def run_mo_gomea(space: SearchSpace, evaluator: Evaluator, budget: int, seed: int,
                 snapshot_points=None, ims_base_population: int = 8,
                 ims_interleave: int = 4, cluster_count: int = 5,
                 stall_limit: int = 50, run_id: str | None = None) -> RunLog:
    rng = np.random.default_rng([ALGO_SEED_TAGS["mogomea"], seed])
    recorder = RunRecorder(evaluator, budget, snapshot_points)
    cap = count_distinct_architectures(space)

    def generation(pop: Population) -> None:
        members = pop.members
        clusters = cluster_population([m.vector for m in members], cluster_count)
        trees = {}
        fallback = None
        for c in range(clusters.k):
            idx = clusters.members_of(c)
            if len(idx) >= 2:
                trees[c] = learn_linkage_tree([members[i].genotype for i in idx])
            else:
                if fallback is None:
                    fallback = learn_linkage_tree([m.genotype for m in members])
                trees[c] = fallback
        for m_idx, member in enumerate(members):
            c = clusters.assignment[m_idx]
            donors = clusters.members_of(c)
            flags = clusters.flagged_objectives(c)
            fos = trees[c].subsets
            for f_idx in rng.permutation(len(fos)):
                donor = members[donors[int(rng.integers(len(donors)))]]
                cand = _copy_subset(member, donor, fos[int(f_idx)])
                if cand is None:
                    continue
                res = recorder.evaluate(cand)
                if gom_accepts(res.vector, member.vector, res.archived, flags):
                    member.genotype = cand
                    member.vector = res.vector
        pop.generation += 1

    truncated = False
    try:
        truncated = _run_ims(
            recorder, budget, cap,
            make_population=lambda size: init_population(space, recorder, rng, size),
            step_population=generation,
            base_size=ims_base_population,
            interleave=ims_interleave,
            stall_limit=stall_limit,
        )
    except BudgetExhausted:
        pass
    return recorder.finish(run_id or f"mogomea_s{seed}", "mogomea", seed, "multi", truncated)


def run_gomea(space: SearchSpace, evaluator: Evaluator, budget: int, seed: int,
              snapshot_points=None, ims_base_population: int = 8,
              ims_interleave: int = 4, stall_limit: int = 50,
              run_id: str | None = None) -> RunLog:
    """Single-objective optimal mixing (fitness = acc_val) with forced improvement."""
    rng = np.random.default_rng([ALGO_SEED_TAGS["gomea"], seed])
    recorder = RunRecorder(evaluator, budget, snapshot_points)
    cap = count_distinct_architectures(space)
    best: dict = {"genotype": None, "fitness": -np.inf}

    def note(genotype: Genotype, fitness: float) -> None:
        if fitness > best["fitness"]:
            best["genotype"] = genotype
            best["fitness"] = fitness

    def make_population(size: int) -> Population:
        pop = init_population(space, recorder, rng, size)
        for m in pop.members:
            note(m.genotype, m.fitness)
        return pop

    def generation(pop: Population) -> None:
        members = pop.members
        tree = learn_linkage_tree([m.genotype for m in members])
        fos = tree.subsets
        n = len(members)
        for member in members:
            start_fitness = member.fitness
            for f_idx in rng.permutation(len(fos)):
                donor = members[int(rng.integers(n))]
                cand = _copy_subset(member, donor, fos[int(f_idx)])
                if cand is None:
                    continue
                res = recorder.evaluate(cand)
                note(cand, res.vector.f1)
                if res.vector.f1 >= member.fitness:
                    member.genotype = cand
                    member.vector = res.vector
            if member.fitness <= start_fitness and best["genotype"] is not None \
                    and best["genotype"] != member.genotype:
                elite = Individual(best["genotype"], member.vector)  # genotype only
                for f_idx in rng.permutation(len(fos)):
                    cand = _copy_subset(member, elite, fos[int(f_idx)])
                    if cand is None:
                        continue
                    res = recorder.evaluate(cand)
                    note(cand, res.vector.f1)
                    if res.vector.f1 > member.fitness:
                        member.genotype = cand
                        member.vector = res.vector
                        break
        pop.generation += 1

    truncated = False
    try:
        truncated = _run_ims(
            recorder, budget, cap,
            make_population=make_population,
            step_population=generation,
            base_size=ims_base_population,
            interleave=ims_interleave,
            stall_limit=stall_limit,
        )
    except BudgetExhausted:
        pass
    return recorder.finish(run_id or f"gomea_s{seed}", "gomea", seed, "single", truncated)
