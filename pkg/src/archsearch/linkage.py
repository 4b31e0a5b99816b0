"""Linkage tree learning and objective-space clustering for optimal mixing.

The linkage tree is built by average-linkage agglomeration over pairwise
mutual information of variable columns. The family of subsets (FOS) holds
every singleton plus every internal merge except the root (full variable
set), giving 2 * length - 2 subsets for length >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pareto import ObjectiveVector
from .spaces import Genotype


@dataclass
class LinkageTree:
    subsets: list[tuple[int, ...]]  # FOS, root excluded
    similarity: np.ndarray  # pairwise mutual information over variables


def mutual_information_matrix(genotypes: Sequence[Genotype]) -> np.ndarray:
    arr = np.asarray(genotypes, dtype=np.int64)
    n, ell = arr.shape
    sizes = arr.max(axis=0) + 1
    mi = np.zeros((ell, ell))
    for i in range(ell):
        for j in range(i + 1, ell):
            a, b = int(sizes[i]), int(sizes[j])
            joint = np.bincount(arr[:, i] * b + arr[:, j], minlength=a * b).reshape(a, b)
            pj = joint / n
            pi_ = pj.sum(axis=1, keepdims=True)
            pj_ = pj.sum(axis=0, keepdims=True)
            mask = pj > 0
            value = float((pj[mask] * np.log(pj[mask] / (pi_ @ pj_)[mask])).sum())
            mi[i, j] = mi[j, i] = value
    return mi


def learn_linkage_tree(genotypes: Sequence[Genotype]) -> LinkageTree:
    """Bottom-up UPGMA merging of variables by mutual-information similarity."""
    if len(genotypes) < 2:
        raise ValueError("need at least 2 genotypes to learn linkage")
    ell = len(genotypes[0])
    mi = mutual_information_matrix(genotypes)
    subsets: list[tuple[int, ...]] = [(i,) for i in range(ell)]
    if ell < 2:
        return LinkageTree(subsets, mi)
    clusters: list[tuple[int, ...]] = [(i,) for i in range(ell)]
    sim = mi.astype(float).copy()
    np.fill_diagonal(sim, -np.inf)
    active = list(range(ell))
    while len(active) > 2:
        best = None
        for ai in range(len(active)):
            for bi in range(ai + 1, len(active)):
                u, v = active[ai], active[bi]
                if best is None or sim[u, v] > best[0]:
                    best = (sim[u, v], u, v)
        _, u, v = best
        merged = tuple(sorted(clusters[u] + clusters[v]))
        subsets.append(merged)
        # average linkage update weighted by cluster sizes
        nu, nv = len(clusters[u]), len(clusters[v])
        clusters.append(merged)
        sim = np.pad(sim, ((0, 1), (0, 1)), constant_values=-np.inf)
        w = len(clusters) - 1
        for o in active:
            if o in (u, v):
                continue
            sim[w, o] = sim[o, w] = (nu * sim[u, o] + nv * sim[v, o]) / (nu + nv)
        active = [o for o in active if o not in (u, v)] + [w]
    # final merge would be the root: excluded from the FOS
    return LinkageTree(subsets, mi)


@dataclass
class ClusterAssignment:
    k: int
    centroids: np.ndarray  # (k, 2) mean objective vectors
    assignment: list[int]  # per-member cluster index
    extreme_f1: int  # cluster with the best mean f1
    extreme_f2: int  # cluster with the best mean f2

    def members_of(self, cluster: int) -> list[int]:
        return [i for i, c in enumerate(self.assignment) if c == cluster]

    def flagged_objectives(self, cluster: int) -> tuple[int, ...]:
        flags = []
        if cluster == self.extreme_f1:
            flags.append(0)
        if cluster == self.extreme_f2:
            flags.append(1)
        return tuple(flags)


def cluster_population(vectors: Sequence[ObjectiveVector], k: int) -> ClusterAssignment:
    """Equal-size leader-based clustering in objective space.

    Small populations (n < 2k) fall back to 3 contiguous chunks along f1
    (two extreme pseudo-clusters plus one middle cluster).
    """
    n = len(vectors)
    if n == 0:
        raise ValueError("cannot cluster an empty population")
    pts = np.asarray(vectors, dtype=float)
    if n < 2 * k:
        k_eff = min(3, n)
        order = sorted(range(n), key=lambda i: (pts[i, 0], pts[i, 1], i))
        assignment = [0] * n
        bounds = np.linspace(0, n, k_eff + 1).astype(int)
        for c in range(k_eff):
            for pos in range(bounds[c], bounds[c + 1]):
                assignment[order[pos]] = c
        return _finish_assignment(pts, k_eff, assignment)

    # greedy max-min leaders, first leader at the best f1
    leaders = [int(np.lexsort((np.arange(n), -pts[:, 1], -pts[:, 0]))[0])]
    dist_to_set = np.linalg.norm(pts - pts[leaders[0]], axis=1)
    while len(leaders) < k:
        nxt = int(np.argmax(dist_to_set))
        leaders.append(nxt)
        dist_to_set = np.minimum(dist_to_set, np.linalg.norm(pts - pts[nxt], axis=1))
    capacity = -(-n // k)
    pairs = sorted(
        (float(np.linalg.norm(pts[i] - pts[leaders[c]])), i, c)
        for i in range(n)
        for c in range(k)
    )
    assignment = [-1] * n
    load = [0] * k
    for _, i, c in pairs:
        if assignment[i] == -1 and load[c] < capacity:
            assignment[i] = c
            load[c] += 1
    return _finish_assignment(pts, k, assignment)


def _finish_assignment(pts: np.ndarray, k: int, assignment: list[int]) -> ClusterAssignment:
    centroids = np.zeros((k, 2))
    for c in range(k):
        idx = [i for i, a in enumerate(assignment) if a == c]
        centroids[c] = pts[idx].mean(axis=0) if idx else -np.inf
    extreme_f1 = int(np.argmax(centroids[:, 0]))
    extreme_f2 = int(np.argmax(centroids[:, 1]))
    return ClusterAssignment(k, centroids, assignment, extreme_f1, extreme_f2)
