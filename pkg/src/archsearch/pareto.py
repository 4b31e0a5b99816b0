"""Strict-domination archive, quality indicators, and scalarization.

Both objectives are maximized and live in [0, 1]; the hypervolume reference
point is the origin. Floating-point comparisons are exact on purpose: table
values are fixed decimals and tolerances would change archive semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class ObjectiveVector(NamedTuple):
    f1: float  # validation accuracy
    f2: float  # 1 - normalized complexity


@dataclass(frozen=True)
class ArchiveEntry:
    key: str
    vector: ObjectiveVector
    acc_test: float
    eval_index: int


def dominates(x: Sequence[float], y: Sequence[float]) -> bool:
    """Strict Pareto domination: componentwise >= and not equal."""
    return x[0] >= y[0] and x[1] >= y[1] and (x[0], x[1]) != (y[0], y[1])


class Archive:
    """Unbounded set of mutually nondominated evaluated solutions.

    Candidates with an objective vector equal to an existing entry are
    rejected (first-seen key wins), so no two entries ever share a key.
    """

    def __init__(self):
        self.entries: list[ArchiveEntry] = []

    def __len__(self) -> int:
        return len(self.entries)

    def update(self, key: str, vector: ObjectiveVector, acc_test: float, eval_index: int) -> bool:
        for e in self.entries:
            if e.vector == vector or dominates(e.vector, vector):
                return False
        self.entries = [e for e in self.entries if not dominates(vector, e.vector)]
        self.entries.append(ArchiveEntry(key, vector, acc_test, eval_index))
        return True

    def frozen(self) -> tuple[ArchiveEntry, ...]:
        """Immutable snapshot sorted by ascending f1 (key breaks ties)."""
        return tuple(sorted(self.entries, key=lambda e: (e.vector.f1, e.vector.f2, e.key)))

    def vectors(self) -> list[ObjectiveVector]:
        return [e.vector for e in self.entries]


def pareto_maxima(points: Iterable[Sequence[float]]) -> list[tuple[float, float]]:
    """Nondominated subset, one representative per distinct vector.

    Returned sorted by ascending f1 (hence strictly descending f2).
    """
    pts = sorted(set((float(p[0]), float(p[1])) for p in points))
    maxima: list[tuple[float, float]] = []
    best_f2 = -np.inf
    for f1, f2 in reversed(pts):
        if f2 > best_f2:
            maxima.append((f1, f2))
            best_f2 = f2
    maxima.reverse()
    return maxima


def hypervolume(front: Iterable[Sequence[float]]) -> float:
    """Area of the union of [0, f1] x [0, f2] rectangles.

    Exact 2-D sweep over the nondominated points; dominated or duplicate
    input points are harmless. Empty input yields 0.
    """
    pts = [(float(p[0]), float(p[1])) for p in front]
    for f1, f2 in pts:
        if not (0.0 <= f1 <= 1.0 and 0.0 <= f2 <= 1.0):
            raise ValueError(f"point ({f1}, {f2}) outside the unit square")
    maxima = pareto_maxima(pts)
    area = 0.0
    prev_f1 = 0.0
    for f1, f2 in maxima:
        area += (f1 - prev_f1) * f2
        prev_f1 = f1
    return area


def igd(front: Iterable[Sequence[float]], reference: Iterable[Sequence[float]]) -> float:
    """Mean Euclidean distance from each reference point to its nearest front point."""
    f = np.asarray([(p[0], p[1]) for p in front], dtype=float)
    r = np.asarray([(p[0], p[1]) for p in reference], dtype=float)
    if r.size == 0:
        raise ValueError("reference set is empty")
    if f.size == 0:
        raise ValueError("front is empty")
    d = np.sqrt(((r[:, None, :] - f[None, :, :]) ** 2).sum(axis=-1))
    return float(d.min(axis=1).mean())


def scalarize(alpha: float, vector: Sequence[float]) -> float:
    """Weighted sum alpha * f1 + (1 - alpha) * f2."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return alpha * vector[0] + (1.0 - alpha) * vector[1]


def epsilon_threshold(acc_star: float, acc_bar: float, eps: float) -> float:
    """Near-optimality bar: acc_star - eps * (acc_star - acc_bar)."""
    if acc_bar > acc_star:
        raise ValueError("acc_bar must not exceed acc_star")
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    return acc_star - eps * (acc_star - acc_bar)
