"""Per-run bookkeeping: evaluation trace, archive snapshots, disk format.

The evaluation trace holds unique architectures only; eval_index is the
unique-evaluation counter at the moment of first evaluation (the seed net
gets index 1). Snapshots freeze the archive at scheduled unique counts.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

from .benchmark import EvaluationCache, Evaluator, clamp01
from .pareto import Archive, ArchiveEntry, ObjectiveVector
from .spaces import canonical_key, canonicalize, Genotype

DEFAULT_SNAPSHOT_POINTS = (10, 100, 700, 1000, 2500, 10000, 18000, 100000)


class BudgetExhausted(Exception):
    """Raised by RunRecorder.evaluate when the unique-evaluation budget is hit."""


def snapshot_schedule(budget: int, explicit: Optional[list[int]] = None) -> tuple[int, ...]:
    if explicit is not None:
        pts = sorted(set(int(p) for p in explicit))
        if any(p < 1 or p > budget for p in pts):
            raise ValueError("snapshot points must lie in [1, budget]")
        return tuple(pts)
    return tuple(p for p in DEFAULT_SNAPSHOT_POINTS if 1 <= p <= budget)


@dataclass(frozen=True)
class TraceEntry:
    eval_index: int
    key: str
    f1: float
    f2: float
    acc_test: float
    complexity: float


@dataclass
class EvalResult:
    key: str
    vector: ObjectiveVector
    acc_test: float
    complexity: float
    is_new: bool
    archived: bool


@dataclass
class RunLog:
    run_id: str
    seed: int
    algorithm: str
    mode: str
    budget: int
    truncated: bool
    trace: list[TraceEntry]
    snapshots: dict[int, tuple[ArchiveEntry, ...]]
    final_archive: tuple[ArchiveEntry, ...]

    @property
    def unique_count(self) -> int:
        return len(self.trace)

    # -- disk format ---------------------------------------------------

    def save(self, out_dir) -> None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, f"trace_{self.run_id}.csv"), "w",
                  encoding="utf-8", newline="\n") as fh:
            fh.write("eval_index,canonical_key,f1,f2,acc_test,complexity\n")
            for t in self.trace:
                fh.write(
                    f"{t.eval_index},{t.key},{t.f1!r},{t.f2!r},{t.acc_test!r},{t.complexity!r}\n"
                )
        for point, entries in self.snapshots.items():
            _write_archive(os.path.join(out_dir, f"archive_{self.run_id}_{point}.csv"), entries)
        _write_archive(os.path.join(out_dir, f"archive_{self.run_id}_final.csv"),
                       self.final_archive)
        meta = {
            "algorithm": self.algorithm,
            "budget": self.budget,
            "mode": self.mode,
            "run_id": self.run_id,
            "seed": self.seed,
            "snapshots": sorted(self.snapshots),
            "truncated": self.truncated,
            "unique_count": self.unique_count,
        }
        with open(os.path.join(out_dir, f"run_{self.run_id}.json"), "w",
                  encoding="utf-8", newline="\n") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, out_dir, run_id: str) -> "RunLog":
        with open(os.path.join(out_dir, f"run_{run_id}.json"), "r", encoding="utf-8") as fh:
            meta = json.load(fh)
        trace: list[TraceEntry] = []
        with open(os.path.join(out_dir, f"trace_{run_id}.csv"), "r", encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n")
            if header != "eval_index,canonical_key,f1,f2,acc_test,complexity":
                raise ValueError(f"unexpected trace header {header!r}")
            for line in fh:
                idx, key, f1, f2, acc_test, comp = line.rstrip("\n").split(",")
                trace.append(TraceEntry(int(idx), key, float(f1), float(f2),
                                        float(acc_test), float(comp)))
        snapshots = {
            int(p): _read_archive(os.path.join(out_dir, f"archive_{run_id}_{p}.csv"))
            for p in meta["snapshots"]
        }
        final = _read_archive(os.path.join(out_dir, f"archive_{run_id}_final.csv"))
        return cls(
            run_id=meta["run_id"],
            seed=meta["seed"],
            algorithm=meta["algorithm"],
            mode=meta["mode"],
            budget=meta["budget"],
            truncated=meta["truncated"],
            trace=trace,
            snapshots=snapshots,
            final_archive=final,
        )


def _write_archive(path, entries: tuple[ArchiveEntry, ...]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("canonical_key,f1,f2,acc_test,eval_index\n")
        for e in sorted(entries, key=lambda e: (e.vector.f1, e.vector.f2, e.key)):
            fh.write(f"{e.key},{e.vector.f1!r},{e.vector.f2!r},{e.acc_test!r},{e.eval_index}\n")


def _read_archive(path) -> tuple[ArchiveEntry, ...]:
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "canonical_key,f1,f2,acc_test,eval_index":
            raise ValueError(f"unexpected archive header {header!r}")
        for line in fh:
            key, f1, f2, acc_test, idx = line.rstrip("\n").split(",")
            entries.append(
                ArchiveEntry(key, ObjectiveVector(float(f1), float(f2)), float(acc_test), int(idx))
            )
    return tuple(entries)


class RunRecorder:
    """Budgeted, cache-aware evaluation front-end shared by all algorithms.

    Every new architecture is traced, offered to the archive, and counted;
    revisits are served from the cache for free. Hitting the budget raises
    BudgetExhausted after the final evaluation is fully recorded.
    """

    def __init__(self, evaluator: Evaluator, budget: int,
                 snapshot_points: Optional[tuple[int, ...]] = None):
        if budget < 1:
            raise ValueError("budget must be >= 1")
        self.evaluator = evaluator
        self.budget = budget
        self.snapshot_points = (
            snapshot_schedule(budget) if snapshot_points is None else tuple(snapshot_points)
        )
        self.cache = EvaluationCache()
        self.archive = Archive()
        self.trace: list[TraceEntry] = []
        self.snapshots: dict[int, tuple[ArchiveEntry, ...]] = {}
        self.archive_accepted = 0

    @property
    def unique_count(self) -> int:
        return self.cache.unique_count

    def evaluate(self, genotype: Genotype) -> EvalResult:
        space = self.evaluator.space
        canon = canonicalize(space, genotype)
        key = canonical_key(space, canon)
        hit = self.cache.get(key)
        if hit is not None:
            vec, acc_test, complexity = hit
            return EvalResult(key, vec, acc_test, complexity, is_new=False, archived=False)
        acc_val, acc_test, complexity = self.evaluator.lookup(key, canon)
        spec = self.evaluator.objective_spec
        f1 = clamp01(acc_val)
        f2 = clamp01(
            1.0 - (complexity - spec.complexity_min)
            / (spec.complexity_max - spec.complexity_min)
        )
        vec = ObjectiveVector(f1, f2)
        self.cache.put(key, vec, acc_test, complexity)
        index = self.cache.unique_count
        self.trace.append(TraceEntry(index, key, f1, f2, acc_test, complexity))
        accepted = self.archive.update(key, vec, acc_test, index)
        if accepted:
            self.archive_accepted += 1
        if index in self.snapshot_points:
            self.snapshots[index] = self.archive.frozen()
        result = EvalResult(key, vec, acc_test, complexity, is_new=True, archived=accepted)
        if index >= self.budget:
            raise BudgetExhausted()
        return result

    def finish(self, run_id: str, algorithm: str, seed: int, mode: str,
               truncated: bool) -> RunLog:
        snapshots = dict(self.snapshots)
        final = self.archive.frozen()
        # a truncated run can never change again, so later scheduled
        # snapshots equal the final archive
        for point in self.snapshot_points:
            if point not in snapshots and point >= self.unique_count:
                snapshots[point] = final
        return RunLog(
            run_id=run_id,
            seed=seed,
            algorithm=algorithm,
            mode=mode,
            budget=self.budget,
            truncated=truncated,
            trace=list(self.trace),
            snapshots=snapshots,
            final_archive=final,
        )
