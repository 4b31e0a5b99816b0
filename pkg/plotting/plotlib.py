"""Shared helpers for the figure scripts.

These scripts consume the harness's exported CSVs and recompute nothing
beyond percentiles and moving-average smoothing; every metric value comes
from the export files.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass

import numpy as np

ALGORITHM_COLORS = {
    "rs": "tab:gray",
    "ls": "tab:green",
    "nsga2": "tab:blue",
    "mogomea": "tab:red",
    "ga": "tab:orange",
    "gomea": "tab:purple",
}


def color_for(algorithm: str) -> str:
    return ALGORITHM_COLORS.get(algorithm, "tab:brown")


@dataclass
class ConvergenceSeries:
    """Per-algorithm aggregation across runs at shared snapshots."""

    algorithm: str
    snapshots: list[int]
    median: np.ndarray
    p25: np.ndarray
    p75: np.ndarray


def read_convergence_csv(path) -> dict[str, dict[int, list[float]]]:
    """algorithm -> snapshot -> per-run values."""
    data: dict[str, dict[int, list[float]]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "algorithm,run_id,snapshot,value":
            raise ValueError(f"{path}: unexpected header {header!r}")
        for line in fh:
            algo, _run, snap, value = line.rstrip("\n").split(",")
            data.setdefault(algo, {}).setdefault(int(snap), []).append(float(value))
    if not data:
        raise ValueError(f"{path}: no rows")
    return data


def percentile_linear(values, q: float) -> float:
    """Linear interpolation between order statistics (q in [0, 100])."""
    return float(np.percentile(np.asarray(values, dtype=float), q, method="linear"))


def convergence_series(data: dict[str, dict[int, list[float]]]) -> list[ConvergenceSeries]:
    """Aggregate runs to median and 25/75th percentile bands.

    All algorithms must share one snapshot grid; mismatches are an error
    naming the offending snapshots.
    """
    grids = {algo: tuple(sorted(snaps)) for algo, snaps in data.items()}
    reference = next(iter(grids.values()))
    bad = {
        algo: sorted(set(grid) ^ set(reference))
        for algo, grid in grids.items()
        if grid != reference
    }
    if bad:
        detail = "; ".join(f"{algo}: {pts}" for algo, pts in sorted(bad.items()))
        raise ValueError(f"snapshot grids differ across algorithms ({detail})")
    out = []
    for algo in sorted(data):
        snaps = list(reference)
        per_snap = [data[algo][s] for s in snaps]
        out.append(
            ConvergenceSeries(
                algorithm=algo,
                snapshots=snaps,
                median=np.array([percentile_linear(v, 50) for v in per_snap]),
                p25=np.array([percentile_linear(v, 25) for v in per_snap]),
                p75=np.array([percentile_linear(v, 75) for v in per_snap]),
            )
        )
    return out


def read_front_csv(path) -> tuple[np.ndarray, np.ndarray]:
    f1s, f2s = [], []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if not header.startswith("canonical_key,f1,f2"):
            raise ValueError(f"{path}: unexpected header {header!r}")
        for line in fh:
            parts = line.rstrip("\n").split(",")
            f1s.append(float(parts[1]))
            f2s.append(float(parts[2]))
    return np.array(f1s), np.array(f2s)


def read_background_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Gray-cloud points from a benchmark table CSV (f1, 1 - normalized complexity)."""
    meta = re.compile(
        r"^#\s*complexity_kind=\w+\s+complexity_min=(\S+)\s+complexity_max=(\S+)\s*$"
    )
    acc, comp = [], []
    lo = hi = None
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first.startswith("#"):
            m = meta.match(first)
            if not m:
                raise ValueError(f"{path}: malformed metadata line")
            lo, hi = float(m.group(1)), float(m.group(2))
            first = fh.readline().rstrip("\n")
        if first != "genotype,acc_val,acc_test,complexity":
            raise ValueError(f"{path}: unexpected header {first!r}")
        for line in fh:
            parts = line.rstrip("\n").split(",")
            acc.append(float(parts[1]))
            comp.append(float(parts[3]))
    comp_arr = np.array(comp)
    if lo is None:
        lo, hi = float(comp_arr.min()), float(comp_arr.max())
    f2 = np.clip(1.0 - (comp_arr - lo) / (hi - lo), 0.0, 1.0)
    return np.array(acc), f2


def read_smoothed_trace(path) -> tuple[str, np.ndarray, np.ndarray]:
    """(algorithm, raw complexity, exported smoothed series) from a trace export."""
    with open(path, "r", encoding="utf-8") as fh:
        meta = fh.readline().rstrip("\n")
        m = re.match(r"^#\s*algorithm=(\S+)\s+window=(\d+)\s*$", meta)
        if not m:
            raise ValueError(f"{path}: missing algorithm metadata line")
        header = fh.readline().rstrip("\n")
        if header != "eval_index,complexity,smoothed":
            raise ValueError(f"{path}: unexpected header {header!r}")
        comp, smooth = [], []
        for line in fh:
            parts = line.rstrip("\n").split(",")
            comp.append(float(parts[1]))
            smooth.append(float(parts[2]))
    if not comp:
        raise ValueError(f"{path}: empty trace")
    return m.group(1), np.array(comp), np.array(smooth)


def moving_average_prefix(values, window: int) -> np.ndarray:
    """Centered moving average via prefix sums, truncated at the ends."""
    if window < 1:
        raise ValueError("window must be >= 1")
    v = np.asarray(values, dtype=float)
    n = len(v)
    prefix = np.concatenate([[0.0], np.cumsum(v)])
    lo_off = (window - 1) // 2
    hi_off = window // 2
    out = np.empty(n)
    for i in range(n):
        lo = max(0, i - lo_off)
        hi = min(n - 1, i + hi_off)
        out[i] = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1)
    return out


def resolve_meta_hash(in_dir, extra_paths=()) -> str:
    """Config hash from export_meta.json, else a digest of the input files."""
    meta_path = os.path.join(in_dir, "export_meta.json")
    if os.path.exists(meta_path):
        with open(meta_path, "r", encoding="utf-8") as fh:
            value = json.load(fh).get("config_hash")
        if value:
            return value
    digest = hashlib.sha256()
    for path in sorted(extra_paths):
        with open(path, "rb") as fh:
            digest.update(fh.read())
    return digest.hexdigest()[:12]


def finalize_figure(fig, out_path, meta_hash: str) -> None:
    """Footer + file metadata carry the generating config hash."""
    fig.text(0.99, 0.01, f"config {meta_hash}", ha="right", va="bottom",
             fontsize=6, color="0.5")
    ext = os.path.splitext(str(out_path))[1].lower()
    if ext not in (".png", ".svg"):
        raise ValueError(f"unsupported output format {ext!r} (use .png or .svg)")
    fig.savefig(out_path, dpi=150, metadata={"Description": f"config {meta_hash}"})
