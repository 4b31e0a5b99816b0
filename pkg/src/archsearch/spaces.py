"""Discrete cell-based encoding spaces and architecture canonicalization.

A genotype is a fixed-length tuple of symbol indices, one per searchable
position. Positions that offer an identity (pass-through) cell are grouped
into segments; within a segment the placement of identity cells is
computationally irrelevant, so every architecture has a unique canonical
representative with non-identity cells packed to the segment front.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from itertools import product
from typing import Iterator, Optional

import numpy as np

Genotype = tuple[int, ...]

BUNDLED_SPACES = ("macronas", "macronas_large")


class SpaceError(ValueError):
    """Invalid space definition or genotype."""


@dataclass(frozen=True)
class SearchSpace:
    """Positional alphabets plus the identity/segment structure.

    segments are half-open [start, end) index runs; they cover exactly the
    identity-bearing positions. Alphabet size and identity symbol must be
    uniform within a segment (the equivalence relation needs symbols to be
    interchangeable across segment positions).
    """

    length: int
    alphabet_sizes: tuple[int, ...]
    identity_symbol: tuple[Optional[int], ...]
    segments: tuple[tuple[int, int], ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.length < 1:
            raise SpaceError("length must be >= 1")
        if len(self.alphabet_sizes) != self.length:
            raise SpaceError("alphabet_sizes length mismatch")
        if len(self.identity_symbol) != self.length:
            raise SpaceError("identity_symbol length mismatch")
        if any(a < 2 for a in self.alphabet_sizes):
            raise SpaceError("every alphabet must have at least 2 symbols")
        for i, ident in enumerate(self.identity_symbol):
            if ident is not None and not 0 <= ident < self.alphabet_sizes[i]:
                raise SpaceError(f"identity symbol out of range at position {i}")
        covered: set[int] = set()
        for start, end in self.segments:
            if not (0 <= start < end <= self.length):
                raise SpaceError(f"segment [{start},{end}) out of bounds")
            sizes = {self.alphabet_sizes[i] for i in range(start, end)}
            idents = {self.identity_symbol[i] for i in range(start, end)}
            if len(sizes) > 1 or len(idents) > 1:
                raise SpaceError(f"segment [{start},{end}) is not homogeneous")
            if idents == {None}:
                raise SpaceError(f"segment [{start},{end}) has no identity symbol")
            for i in range(start, end):
                if i in covered:
                    raise SpaceError(f"position {i} in more than one segment")
                covered.add(i)
        for i in range(self.length):
            if self.identity_symbol[i] is not None and i not in covered:
                raise SpaceError(f"identity-bearing position {i} outside all segments")
        if self.labels is not None and len(self.labels) != self.length:
            raise SpaceError("labels length mismatch")

    @cached_property
    def free_positions(self) -> tuple[int, ...]:
        """Positions belonging to no segment (no identity option)."""
        in_seg = {i for s, e in self.segments for i in range(s, e)}
        return tuple(i for i in range(self.length) if i not in in_seg)

    @cached_property
    def _sizes_array(self) -> np.ndarray:
        return np.asarray(self.alphabet_sizes, dtype=np.int64)

    @cached_property
    def _digit_keys(self) -> bool:
        return max(self.alphabet_sizes) <= 10

    def validate_genotype(self, genotype: Genotype) -> None:
        if len(genotype) != self.length:
            raise SpaceError("genotype length mismatch")
        for i, s in enumerate(genotype):
            if not 0 <= s < self.alphabet_sizes[i]:
                raise SpaceError(f"symbol {s} out of range at position {i}")


def random_genotype(space: SearchSpace, rng: np.random.Generator) -> Genotype:
    """Draw each position independently and uniformly from its alphabet."""
    draws = rng.integers(0, space._sizes_array)
    return tuple(int(v) for v in draws)


def canonicalize(space: SearchSpace, genotype: Genotype) -> Genotype:
    """Pack non-identity symbols to each segment's front, identities to the tail.

    Idempotent; two genotypes map to the same output iff they encode the
    same architecture. Positions outside segments are untouched.
    """
    if not space.segments:
        return tuple(genotype)
    out = list(genotype)
    for start, end in space.segments:
        ident = space.identity_symbol[start]
        kept = [s for s in out[start:end] if s != ident]
        out[start:end] = kept + [ident] * (end - start - len(kept))
    return tuple(out)


def canonical_key(space: SearchSpace, canonical: Genotype) -> str:
    """Stable string key for an already-canonical genotype."""
    if space._digit_keys:
        return "".join(str(s) for s in canonical)
    return "-".join(str(s) for s in canonical)


def key_to_genotype(space: SearchSpace, key: str) -> Genotype:
    if space._digit_keys:
        if len(key) != space.length or not key.isdigit():
            raise SpaceError(f"malformed genotype string {key!r}")
        g = tuple(int(c) for c in key)
    else:
        g = tuple(int(part) for part in key.split("-"))
    space.validate_genotype(g)
    return g


def encoding_count(space: SearchSpace) -> int:
    """Number of raw encodings (product of alphabet sizes)."""
    total = 1
    for a in space.alphabet_sizes:
        total *= a
    return total


def count_distinct_architectures(space: SearchSpace) -> int:
    """Closed-form count of computationally unique architectures.

    Each segment of length n with uniform alphabet size a contributes
    sum((a-1)**k for k in 0..n) canonical settings (ordered sequences of
    non-identity cells, padded with identities); positions outside segments
    contribute their full alphabet.
    """
    total = 1
    for start, end in space.segments:
        a = space.alphabet_sizes[start]
        n = end - start
        total *= sum((a - 1) ** k for k in range(n + 1))
    for i in space.free_positions:
        total *= space.alphabet_sizes[i]
    return total


def trivial_genotype(space: SearchSpace) -> Genotype:
    """The all-identity genotype. Fails when a position has no identity cell."""
    if any(ident is None for ident in space.identity_symbol):
        raise SpaceError("no trivial net: some positions lack an identity symbol")
    return tuple(space.identity_symbol)  # type: ignore[arg-type]


def seed_genotype(space: SearchSpace) -> Genotype:
    """Cheapest-seed solution: identity wherever available, symbol 0 elsewhere."""
    return tuple(ident if ident is not None else 0 for ident in space.identity_symbol)


def enumerate_canonical_genotypes(space: SearchSpace) -> Iterator[Genotype]:
    """Yield every distinct architecture exactly once, in canonical form.

    Deterministic order. The number of items equals
    count_distinct_architectures(space); call sites must guard size.
    """
    blocks: list[tuple[int, list[tuple[int, ...]]]] = []
    for start, end in space.segments:
        a = space.alphabet_sizes[start]
        ident = space.identity_symbol[start]
        others = [s for s in range(a) if s != ident]
        n = end - start
        options: list[tuple[int, ...]] = []
        for k in range(n + 1):
            for seq in product(others, repeat=k):
                options.append(seq + (ident,) * (n - k))
        blocks.append((start, options))
    for i in space.free_positions:
        blocks.append((i, [(s,) for s in range(space.alphabet_sizes[i])]))
    blocks.sort(key=lambda b: b[0])
    option_lists = [opts for _, opts in blocks]
    for combo in product(*option_lists):
        g: tuple[int, ...] = ()
        for part in combo:
            g += part
        yield g


def space_to_dict(space: SearchSpace) -> dict:
    d: dict = {
        "length": space.length,
        "alphabet_sizes": list(space.alphabet_sizes),
        "identity_symbol": list(space.identity_symbol),
        "segments": [list(seg) for seg in space.segments],
    }
    if space.labels is not None:
        d["labels"] = list(space.labels)
    return d


def space_from_dict(d: dict) -> SearchSpace:
    try:
        return SearchSpace(
            length=int(d["length"]),
            alphabet_sizes=tuple(int(a) for a in d["alphabet_sizes"]),
            identity_symbol=tuple(
                None if v is None else int(v) for v in d["identity_symbol"]
            ),
            segments=tuple((int(s), int(e)) for s, e in d["segments"]),
            labels=tuple(str(x) for x in d["labels"]) if "labels" in d else None,
        )
    except (KeyError, TypeError) as exc:
        raise SpaceError(f"malformed space description: {exc}") from exc


def save_space(space: SearchSpace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(space_to_dict(space), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_space(path_or_name) -> SearchSpace:
    """Load a space description from a JSON file or a bundled name."""
    name = str(path_or_name)
    if name in BUNDLED_SPACES:
        text = (
            resources.files("archsearch").joinpath(f"data/{name}.json").read_text("utf-8")
        )
        return space_from_dict(json.loads(text))
    with open(path_or_name, "r", encoding="utf-8") as fh:
        return space_from_dict(json.load(fh))
