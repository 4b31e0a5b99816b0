"""Cached-evaluation tables, normalized objectives, and synthetic surrogates.

Tables map canonical genotype keys to (acc_val, acc_test, raw complexity).
Objectives are (f1, f2) = (acc_val, 1 - normalized complexity), both
maximized. Evaluation accounting counts unique architectures only.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Protocol

import numpy as np

from .pareto import ObjectiveVector
from .spaces import (
    SearchSpace,
    Genotype,
    canonical_key,
    canonicalize,
    count_distinct_architectures,
    enumerate_canonical_genotypes,
    key_to_genotype,
)

COMPLEXITY_KINDS = ("mmacs", "parameters")
ENUMERATION_GUARD = 10_000_000

_META_RE = re.compile(
    r"^#\s*complexity_kind=(\w+)\s+complexity_min=(\S+)\s+complexity_max=(\S+)\s*$"
)
_HEADER = "genotype,acc_val,acc_test,complexity"


class TableError(ValueError):
    """Malformed, conflicting, or unusable benchmark data."""


def clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


@dataclass(frozen=True)
class ObjectiveSpec:
    """Complexity normalization bounds (smallest/largest achievable nets)."""

    complexity_min: float
    complexity_max: float
    complexity_kind: str = "mmacs"

    def __post_init__(self):
        if not self.complexity_min < self.complexity_max:
            raise TableError("complexity_min must be < complexity_max")
        if self.complexity_kind not in COMPLEXITY_KINDS:
            raise TableError(f"unknown complexity kind {self.complexity_kind!r}")


@dataclass(frozen=True)
class BenchmarkRecord:
    canonical_key: str
    acc_val: float
    acc_test: float
    complexity: float


class Evaluator(Protocol):
    space: SearchSpace
    objective_spec: ObjectiveSpec

    def lookup(self, key: str, canonical: Genotype) -> tuple[float, float, float]:
        """Return (acc_val, acc_test, complexity) for a canonical genotype."""
        ...


class BenchmarkTable:
    """Associative store from canonical key to cached evaluation values."""

    def __init__(
        self,
        space: SearchSpace,
        keys: list[str],
        acc_val: np.ndarray,
        acc_test: np.ndarray,
        complexity: np.ndarray,
        objective_spec: ObjectiveSpec,
    ):
        self.space = space
        self.keys = list(keys)
        self.acc_val = np.asarray(acc_val, dtype=float)
        self.acc_test = np.asarray(acc_test, dtype=float)
        self.complexity = np.asarray(complexity, dtype=float)
        self.objective_spec = objective_spec
        self.index = {k: i for i, k in enumerate(self.keys)}
        if len(self.index) != len(self.keys):
            raise TableError("duplicate canonical keys")
        n = len(self.keys)
        if not (len(self.acc_val) == len(self.acc_test) == len(self.complexity) == n):
            raise TableError("column length mismatch")

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def complete(self) -> bool:
        return len(self.keys) == count_distinct_architectures(self.space)

    def lookup(self, key: str, canonical: Genotype) -> tuple[float, float, float]:
        i = self.index.get(key)
        if i is None:
            raise TableError(
                f"architecture {key!r} not in table (table/space mismatch or incomplete table)"
            )
        return float(self.acc_val[i]), float(self.acc_test[i]), float(self.complexity[i])

    def record(self, key: str) -> BenchmarkRecord:
        i = self.index[key]
        return BenchmarkRecord(
            key, float(self.acc_val[i]), float(self.acc_test[i]), float(self.complexity[i])
        )

    def records(self) -> Iterator[BenchmarkRecord]:
        for k in self.keys:
            yield self.record(k)


class EvaluationCache:
    """Per-run memo of evaluated architectures; the unique-evaluation counter."""

    def __init__(self):
        self.seen: dict[str, tuple[ObjectiveVector, float, float]] = {}

    @property
    def unique_count(self) -> int:
        return len(self.seen)

    def get(self, key: str):
        return self.seen.get(key)

    def put(self, key: str, vector: ObjectiveVector, acc_test: float, complexity: float):
        self.seen[key] = (vector, acc_test, complexity)


def objectives(evaluator: Evaluator, genotype: Genotype, cache: EvaluationCache) -> ObjectiveVector:
    """Evaluate a genotype, caching by canonical architecture.

    f1 = acc_val, f2 = 1 - (complexity - min) / (max - min), both clamped to
    [0, 1]. Re-queries of a seen architecture never touch the evaluator.
    """
    canon = canonicalize(evaluator.space, genotype)
    key = canonical_key(evaluator.space, canon)
    hit = cache.get(key)
    if hit is not None:
        return hit[0]
    acc_val, acc_test, complexity = evaluator.lookup(key, canon)
    spec = evaluator.objective_spec
    f1 = clamp01(acc_val)
    f2 = clamp01(
        1.0 - (complexity - spec.complexity_min) / (spec.complexity_max - spec.complexity_min)
    )
    vec = ObjectiveVector(f1, f2)
    cache.put(key, vec, acc_test, complexity)
    return vec


# ---------------------------------------------------------------------------
# CSV format
# ---------------------------------------------------------------------------

def load_table(path, space: SearchSpace) -> BenchmarkTable:
    """Parse a benchmark CSV; rows are canonicalized and deduplicated.

    Duplicate canonical keys must agree within 1e-9 on every value, otherwise
    the table is considered corrupt.
    """
    if max(space.alphabet_sizes) > 10:
        raise TableError("CSV tables support alphabets of size <= 10 only")
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    meta: Optional[ObjectiveSpec] = None
    pos = 0
    if lines and lines[pos].startswith("#"):
        m = _META_RE.match(lines[pos])
        if not m:
            raise TableError(f"malformed metadata line: {lines[pos]!r}")
        meta = ObjectiveSpec(float(m.group(2)), float(m.group(3)), m.group(1))
        pos += 1
    if pos >= len(lines) or lines[pos] != _HEADER:
        raise TableError(f"expected header {_HEADER!r}")
    pos += 1

    keys: list[str] = []
    rows: dict[str, tuple[float, float, float]] = {}
    for ln_no, line in enumerate(lines[pos:], start=pos + 1):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise TableError(f"line {ln_no}: expected 4 fields, got {len(parts)}")
        try:
            g = key_to_genotype(space, parts[0])
            acc_val, acc_test, complexity = (float(p) for p in parts[1:])
        except (ValueError, TypeError) as exc:
            raise TableError(f"line {ln_no}: {exc}") from exc
        if not (0.0 <= acc_val <= 1.0 and 0.0 <= acc_test <= 1.0):
            raise TableError(f"line {ln_no}: accuracy outside [0, 1]")
        if complexity < 0.0:
            raise TableError(f"line {ln_no}: negative complexity")
        key = canonical_key(space, canonicalize(space, g))
        vals = (acc_val, acc_test, complexity)
        prev = rows.get(key)
        if prev is None:
            rows[key] = vals
            keys.append(key)
        elif any(abs(a - b) > 1e-9 for a, b in zip(prev, vals)):
            raise TableError(f"line {ln_no}: conflicting values for architecture {key!r}")
    if not keys:
        raise TableError("table has no rows")

    acc_val_col = np.array([rows[k][0] for k in keys])
    acc_test_col = np.array([rows[k][1] for k in keys])
    comp_col = np.array([rows[k][2] for k in keys])
    if meta is None:
        lo, hi = float(comp_col.min()), float(comp_col.max())
        if not lo < hi:
            raise TableError(
                "degenerate complexity range; supply explicit min/max metadata"
            )
        meta = ObjectiveSpec(lo, hi, "mmacs")
    return BenchmarkTable(space, keys, acc_val_col, acc_test_col, comp_col, meta)


def save_table(table: BenchmarkTable, path) -> None:
    """Write the canonical CSV form (metadata line, header, key-sorted rows)."""
    spec = table.objective_spec
    order = sorted(range(len(table.keys)), key=lambda i: table.keys[i])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            f"# complexity_kind={spec.complexity_kind} "
            f"complexity_min={spec.complexity_min!r} "
            f"complexity_max={spec.complexity_max!r}\n"
        )
        fh.write(_HEADER + "\n")
        for i in order:
            fh.write(
                f"{table.keys[i]},{float(table.acc_val[i])!r},"
                f"{float(table.acc_test[i])!r},{float(table.complexity[i])!r}\n"
            )


# ---------------------------------------------------------------------------
# Synthetic surrogate tables
# ---------------------------------------------------------------------------

_MODEL_TAG = 7901
_BASE_ACC = 0.1
_ACC_HEADROOM = 0.8
_TEST_NOISE = 0.01


class SyntheticModel:
    """Deterministic surrogate landscape over a space's architectures.

    acc_val is a clamped sum of per-position cell contributions plus
    ruggedness-weighted pairwise interactions evaluated on the canonical
    form; identity cells contribute zero accuracy and zero complexity, so
    low complexity structurally correlates with identity count. At
    ruggedness 0 the landscape is additively separable over raw positions.
    """

    def __init__(self, space: SearchSpace, seed: int, ruggedness: float):
        if not 0.0 <= ruggedness <= 1.0:
            raise ValueError("ruggedness must lie in [0, 1]")
        self.space = space
        self.seed = int(seed)
        self.ruggedness = float(ruggedness)
        rng = np.random.default_rng([_MODEL_TAG, self.seed])
        ell = space.length
        amax = max(space.alphabet_sizes)
        per_pos = _ACC_HEADROOM / ell
        self.contrib = np.zeros((ell, amax))
        self.cost = np.zeros((ell, amax))
        for start, end in space.segments:
            a = space.alphabet_sizes[start]
            ident = space.identity_symbol[start]
            c_row = np.zeros(a)
            w_row = np.zeros(a)
            for s in range(a):
                if s == ident:
                    continue
                c_row[s] = rng.uniform(0.2, 1.0) * per_pos
                w_row[s] = rng.uniform(0.2, 1.0)
            for i in range(start, end):
                self.contrib[i, :a] = c_row
                self.cost[i, :a] = w_row
        for i in space.free_positions:
            a = space.alphabet_sizes[i]
            self.contrib[i, :a] = rng.uniform(0.2, 1.0, size=a) * per_pos
            # symbol 0 cheapest, so the fallback seed net has minimum complexity
            self.cost[i, :a] = np.sort(rng.uniform(0.2, 1.0, size=a))
        amp = 0.5 * per_pos
        self.interactions: dict[tuple[int, int], np.ndarray] = {}
        for i in range(ell):
            for j in range(i + 1, ell):
                m = rng.uniform(-1.0, 1.0, size=(space.alphabet_sizes[i], space.alphabet_sizes[j]))
                m *= amp
                if space.identity_symbol[i] is not None:
                    m[space.identity_symbol[i], :] = 0.0
                if space.identity_symbol[j] is not None:
                    m[:, space.identity_symbol[j]] = 0.0
                self.interactions[(i, j)] = m

    @property
    def complexity_min(self) -> float:
        return float(self.cost.min(axis=1).sum())

    @property
    def complexity_max(self) -> float:
        return float(self.cost.max(axis=1).sum())

    def _test_noise(self, key: str) -> float:
        digest = hashlib.blake2b(f"{self.seed}|{key}".encode(), digest_size=8).digest()
        u = int.from_bytes(digest, "big") / 2.0**64
        return (2.0 * u - 1.0) * _TEST_NOISE

    def score_batch(self, arr: np.ndarray, keys: list[str]):
        """Score canonical genotypes stacked as an (N, length) array."""
        pos = np.arange(self.space.length)
        contrib = self.contrib[pos, arr].sum(axis=1)
        complexity = self.cost[pos, arr].sum(axis=1)
        inter = np.zeros(len(arr))
        for (i, j), m in self.interactions.items():
            inter += m[arr[:, i], arr[:, j]]
        acc_val = np.clip(_BASE_ACC + contrib + self.ruggedness * inter, 0.0, 1.0)
        noise = np.array([self._test_noise(k) for k in keys])
        acc_test = np.clip(acc_val + noise, 0.0, 1.0)
        return acc_val, acc_test, complexity

    def score_one(self, canonical: Genotype, key: str) -> tuple[float, float, float]:
        arr = np.asarray([canonical], dtype=np.int64)
        acc_val, acc_test, complexity = self.score_batch(arr, [key])
        return float(acc_val[0]), float(acc_test[0]), float(complexity[0])


def generate_synthetic(space: SearchSpace, seed: int, ruggedness: float) -> BenchmarkTable:
    """Enumerate every architecture of a small space into a synthetic table."""
    n = count_distinct_architectures(space)
    if n > ENUMERATION_GUARD:
        raise TableError(
            f"space has {n} architectures; enumeration guard is {ENUMERATION_GUARD}"
        )
    model = SyntheticModel(space, seed, ruggedness)
    genotypes = list(enumerate_canonical_genotypes(space))
    arr = np.asarray(genotypes, dtype=np.int64)
    keys = [canonical_key(space, g) for g in genotypes]
    acc_val, acc_test, complexity = model.score_batch(arr, keys)
    spec = ObjectiveSpec(model.complexity_min, model.complexity_max, "mmacs")
    return BenchmarkTable(space, keys, acc_val, acc_test, complexity, spec)


class SyntheticEvaluator:
    """On-demand synthetic scores for spaces too large to enumerate.

    Produces exactly the same values as generate_synthetic for the same
    (space, seed, ruggedness).
    """

    def __init__(self, space: SearchSpace, seed: int, ruggedness: float,
                 objective_spec: Optional[ObjectiveSpec] = None):
        self.space = space
        self.model = SyntheticModel(space, seed, ruggedness)
        self.objective_spec = objective_spec or ObjectiveSpec(
            self.model.complexity_min, self.model.complexity_max, "mmacs"
        )

    def lookup(self, key: str, canonical: Genotype) -> tuple[float, float, float]:
        return self.model.score_one(canonical, key)


def exhaustive_pareto_front(table: BenchmarkTable) -> list[tuple[str, ObjectiveVector]]:
    """Strict-domination maxima of a complete table, ascending in f1.

    Keeps one representative key per distinct objective vector.
    """
    if not table.complete:
        raise TableError("exact front requires a complete table")
    spec = table.objective_spec
    f1 = np.clip(table.acc_val, 0.0, 1.0)
    f2 = np.clip(
        1.0 - (table.complexity - spec.complexity_min)
        / (spec.complexity_max - spec.complexity_min),
        0.0,
        1.0,
    )
    keys_arr = np.array(table.keys)
    order = np.lexsort((keys_arr, -f2, -f1))
    front: list[tuple[str, ObjectiveVector]] = []
    best_f2 = -np.inf
    for i in order:
        if f2[i] > best_f2:
            front.append((str(keys_arr[i]), ObjectiveVector(float(f1[i]), float(f2[i]))))
            best_f2 = f2[i]
    front.reverse()
    return front
