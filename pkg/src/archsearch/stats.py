"""Run statistics: rank tests, success curves, metric series, smoothing."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .pareto import ObjectiveVector, epsilon_threshold, hypervolume, igd
from .runlog import RunLog

METRICS = ("hv_val", "hv_test", "igd")


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _exact_two_sided_p(n1: int, n2: int, u: float) -> float:
    """Two-sided p by full enumeration of rank arrangements (untied samples)."""
    u_min = min(u, n1 * n2 - u)
    total = 0
    count = 0
    for positions in combinations(range(1, n1 + n2 + 1), n1):
        u_c = sum(positions) - n1 * (n1 + 1) / 2.0
        total += 1
        if min(u_c, n1 * n2 - u_c) <= u_min:
            count += 1
    return count / total


def mann_whitney_u(sample_a: Sequence[float], sample_b: Sequence[float]) -> tuple[float, float]:
    """U statistic (pairs where a beats b, ties half) and two-sided p-value.

    Exact enumeration when min(n) <= 8 and no ties; otherwise the normal
    approximation with tie-corrected variance and continuity correction.
    """
    a = [float(x) for x in sample_a]
    b = [float(x) for x in sample_b]
    if not a or not b:
        raise ValueError("samples must be nonempty")
    n1, n2 = len(a), len(b)
    combined = a + b
    ranks = _midranks(combined)
    r1 = sum(ranks[:n1])
    u = r1 - n1 * (n1 + 1) / 2.0
    has_ties = len(set(combined)) < len(combined)
    if min(n1, n2) <= 8 and not has_ties:
        return u, _exact_two_sided_p(n1, n2, u)
    n = n1 + n2
    tie_sum = 0
    for v in set(combined):
        t = combined.count(v)
        tie_sum += t**3 - t
    var = n1 * n2 / 12.0 * ((n + 1) - tie_sum / (n * (n - 1)))
    if var <= 0:
        return u, 1.0
    z = (abs(u - n1 * n2 / 2.0) - 0.5) / math.sqrt(var)
    z = max(z, 0.0)
    return u, math.erfc(z / math.sqrt(2.0))


@dataclass(frozen=True)
class StatsResult:
    algorithm_a: str
    algorithm_b: str
    metric: str
    snapshot: int
    n_a: int
    n_b: int
    median_a: float
    median_b: float
    u: float
    p: float
    p_adjusted: float
    significant: bool  # at 99% confidence after Bonferroni


def pairwise_tests(samples: dict[str, list[float]], metric: str, snapshot: int) -> list[StatsResult]:
    """All-pairs Mann-Whitney tests, Bonferroni-adjusted over the pair family."""
    names = sorted(samples)
    m = len(names) * (len(names) - 1) // 2
    results = []
    for a, b in combinations(names, 2):
        u, p = mann_whitney_u(samples[a], samples[b])
        p_adj = min(1.0, p * m)
        results.append(StatsResult(
            a, b, metric, snapshot, len(samples[a]), len(samples[b]),
            float(np.median(samples[a])), float(np.median(samples[b])),
            u, p, p_adj, p_adj < 0.01,
        ))
    return results


def metric_series(log: RunLog, metric: str,
                  reference: Optional[Sequence[ObjectiveVector]] = None) -> list[tuple[int, float]]:
    """Metric value at every snapshot, ascending by snapshot point.

    hv_test re-plots the validation-selected archive with f1 replaced by
    acc_test (dominated points are reduced away inside the sweep).
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    if metric == "igd" and reference is None:
        raise ValueError("igd requires a reference front")
    series = []
    for point in sorted(log.snapshots):
        entries = log.snapshots[point]
        if metric == "hv_val":
            value = hypervolume([e.vector for e in entries])
        elif metric == "hv_test":
            value = hypervolume([(e.acc_test, e.vector.f2) for e in entries])
        else:
            value = igd([e.vector for e in entries], reference)
        series.append((point, value))
    return series


def success_rate_curve(logs: Iterable[RunLog], acc_star: float, acc_bar: float,
                       eps: float) -> list[tuple[int, int]]:
    """Per unique-evaluation count, how many runs reached the near-optimality bar."""
    logs = list(logs)
    for log in logs:
        if log.mode != "single":
            raise ValueError(f"run {log.run_id} is not single-objective")
    if not logs:
        raise ValueError("no runs given")
    threshold = epsilon_threshold(acc_star, acc_bar, eps)
    first_success: list[Optional[int]] = []
    horizon = 0
    for log in logs:
        hit = None
        for t in log.trace:
            if t.f1 >= threshold:
                hit = t.eval_index
                break
        first_success.append(hit)
        horizon = max(horizon, log.unique_count)
    curve = []
    for t in range(1, horizon + 1):
        n = sum(1 for h in first_success if h is not None and h <= t)
        curve.append((t, n))
    return curve


def moving_average(values: Sequence[float], window: int) -> np.ndarray:
    """Centered moving average, truncated at the series ends."""
    if window < 1:
        raise ValueError("window must be >= 1")
    v = np.asarray(values, dtype=float)
    n = len(v)
    if n == 0:
        return np.zeros(0)
    lo_off = (window - 1) // 2
    hi_off = window // 2
    conv = np.convolve(v, np.ones(window))
    sums = conv[hi_off:hi_off + n]
    idx = np.arange(n)
    counts = np.minimum(n - 1, idx + hi_off) - np.maximum(0, idx - lo_off) + 1
    return sums / counts


def complexity_trace(log: RunLog, window: int = 75) -> np.ndarray:
    """Smoothed raw complexity over the unique-evaluation order."""
    return moving_average([t.complexity for t in log.trace], window)
