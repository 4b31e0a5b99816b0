"""Shared population containers for the evolutionary algorithms."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pareto import ObjectiveVector
from .runlog import RunRecorder
from .spaces import Genotype, SearchSpace, random_genotype, seed_genotype


@dataclass
class Individual:
    genotype: Genotype
    vector: ObjectiveVector

    @property
    def fitness(self) -> float:
        return self.vector.f1


@dataclass
class Population:
    members: list[Individual]
    generation: int = 0

    def __len__(self) -> int:
        return len(self.members)

    def converged(self) -> bool:
        first = self.members[0].genotype
        return all(m.genotype == first for m in self.members)


def init_population(space: SearchSpace, recorder: RunRecorder,
                    rng: np.random.Generator, size: int) -> Population:
    """Seed net plus uniform randoms, all evaluated."""
    members: list[Individual] = []
    g = seed_genotype(space)
    res = recorder.evaluate(g)
    members.append(Individual(g, res.vector))
    for _ in range(size - 1):
        g = random_genotype(space, rng)
        res = recorder.evaluate(g)
        members.append(Individual(g, res.vector))
    return Population(members)


def mutate(space: SearchSpace, rng: np.random.Generator, genotype: Genotype,
           rate: float) -> Genotype:
    """Flip each position with the given probability to a different symbol."""
    g = list(genotype)
    for i in range(space.length):
        if rng.random() < rate:
            a = space.alphabet_sizes[i]
            shift = int(rng.integers(1, a))
            g[i] = (g[i] + shift) % a
    return tuple(g)
