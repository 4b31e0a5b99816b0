import math

import numpy as np
import pytest

from archsearch import (
    ObjectiveVector,
    cluster_population,
    crowding_distance,
    dominates,
    learn_linkage_tree,
    non_dominated_sort,
    run_ga,
    run_gomea,
    run_mo_gomea,
    run_nsga2,
    run_random_search,
)
from archsearch.ga import uniform_crossover
from archsearch.gomea import gom_accepts, _copy_subset
from archsearch.nsga2 import environmental_select, two_point_crossover
from archsearch.populations import Individual, mutate
from archsearch.stats import mann_whitney_u


def brute_force_maxima(points):
    pts = set(points)
    return {
        p
        for p in pts
        if not any(q != p and q[0] >= p[0] and q[1] >= p[1] for q in pts)
    }


def iterative_maxima_fronts(vectors):
    remaining = list(enumerate(vectors))
    fronts = []
    while remaining:
        front = [
            i
            for i, v in remaining
            if not any(dominates(w, v) for _, w in remaining)
        ]
        fronts.append(sorted(front))
        remaining = [(i, v) for i, v in remaining if i not in front]
    return fronts


class TestNonDominatedSort:
    def test_chain_gives_singleton_fronts(self):
        vs = [ObjectiveVector(0.1, 0.1), ObjectiveVector(0.2, 0.2), ObjectiveVector(0.3, 0.3)]
        assert non_dominated_sort(vs) == [[2], [1], [0]]

    def test_incomparable_single_front(self):
        vs = [ObjectiveVector(0.1, 0.9), ObjectiveVector(0.5, 0.5), ObjectiveVector(0.9, 0.1)]
        assert non_dominated_sort(vs) == [[0, 1, 2]]

    def test_matches_iterative_maxima_oracle(self):
        rng = np.random.default_rng(8)
        vs = [ObjectiveVector(float(x), float(y)) for x, y in rng.random((50, 2))]
        got = [sorted(f) for f in non_dominated_sort(vs)]
        assert got == iterative_maxima_fronts(vs)


class TestCrowdingDistance:
    def test_small_fronts_all_infinite(self):
        assert crowding_distance([ObjectiveVector(0.5, 0.5)]) == [math.inf]
        two = [ObjectiveVector(0.2, 0.8), ObjectiveVector(0.8, 0.2)]
        assert crowding_distance(two) == [math.inf, math.inf]

    def test_collinear_equidistant_middle(self):
        vs = [ObjectiveVector(0.0, 1.0), ObjectiveVector(0.5, 0.5), ObjectiveVector(1.0, 0.0)]
        d = crowding_distance(vs)
        assert d[0] == math.inf and d[2] == math.inf
        assert d[1] == pytest.approx(2.0)

    def test_zero_range_objective_contributes_nothing(self):
        vs = [
            ObjectiveVector(0.1, 0.5),
            ObjectiveVector(0.2, 0.5),
            ObjectiveVector(0.3, 0.5),
            ObjectiveVector(0.4, 0.5),
        ]
        d = crowding_distance(vs)
        assert all(np.isfinite(d[1:3]))
        assert d[1] == pytest.approx((0.3 - 0.1) / 0.3)


class TestEnvironmentalSelection:
    def test_rank_dominance_invariant(self):
        rng = np.random.default_rng(12)
        vs = [ObjectiveVector(float(x), float(y)) for x, y in rng.random((40, 2))]
        keep = environmental_select(vs, 15)
        fronts = non_dominated_sort(vs)
        rank = {}
        for r, front in enumerate(fronts):
            for i in front:
                rank[i] = r
        discarded = [i for i in range(40) if i not in keep]
        assert max(rank[i] for i in keep) <= min(rank[i] for i in discarded)

    def test_boundary_rank_truncated_by_crowding(self):
        vs = [
            ObjectiveVector(0.0, 1.0),
            ObjectiveVector(0.4, 0.6),
            ObjectiveVector(0.41, 0.59),
            ObjectiveVector(1.0, 0.0),
        ]
        keep = environmental_select(vs, 3)
        assert 0 in keep and 3 in keep
        assert len({1, 2} & set(keep)) == 1


class TestVariationOperators:
    def test_two_point_crossover_preserves_symbols(self):
        rng = np.random.default_rng(1)
        a = (0,) * 10
        b = (1,) * 10
        c1, c2 = two_point_crossover(rng, a, b)
        assert tuple(x + y for x, y in zip(c1, c2)) == (1,) * 10

    def test_uniform_crossover_identical_parents(self):
        rng = np.random.default_rng(1)
        p = (0, 1, 2, 1, 0)
        c1, c2 = uniform_crossover(rng, p, p)
        assert c1 == p and c2 == p

    def test_mutation_rate_zero_is_identity(self, macronas):
        rng = np.random.default_rng(2)
        g = tuple(rng.integers(0, 3, size=14))
        assert mutate(macronas, rng, g, 0.0) == g

    def test_mutation_always_changes_flipped_symbol(self, macronas):
        rng = np.random.default_rng(2)
        g = tuple(int(x) for x in rng.integers(0, 3, size=14))
        for _ in range(20):
            m = mutate(macronas, rng, g, 1.0)
            assert all(a != b for a, b in zip(m, g))

    def test_mutation_expected_flip_count(self, macronas):
        rng = np.random.default_rng(3)
        g = (0,) * 14
        flips = 0
        n = 2000
        for _ in range(n):
            flips += sum(a != b for a, b in zip(mutate(macronas, rng, g, 1 / 14), g))
        assert flips / n == pytest.approx(1.0, abs=0.1)


class TestNsga2:
    def test_generation_zero_unique_accounting(self, toy6, table6_rugged):
        log = run_nsga2(toy6, table6_rugged, budget=120, seed=3, population_size=100,
                        snapshot_points=(100,))
        init_keys = {t.key for t in log.trace[:100]}
        assert len(init_keys) == 100

    def test_first_hundred_statistically_like_rs(self, macronas, macronas_table_rugged):
        from archsearch import hypervolume

        hv_nsga, hv_rs = [], []
        for seed in range(20):
            log_n = run_nsga2(macronas, macronas_table_rugged, budget=100, seed=seed,
                              snapshot_points=(100,))
            log_r = run_random_search(macronas, macronas_table_rugged, budget=100,
                                      seed=seed, snapshot_points=(100,))
            hv_nsga.append(hypervolume([e.vector for e in log_n.snapshots[100]]))
            hv_rs.append(hypervolume([e.vector for e in log_r.snapshots[100]]))
        _, p = mann_whitney_u(hv_nsga, hv_rs)
        assert p > 0.05

    def test_archive_matches_replay_maxima(self, toy6, table6_rugged):
        log = run_nsga2(toy6, table6_rugged, budget=250, seed=5, population_size=20)
        expected = brute_force_maxima((t.f1, t.f2) for t in log.trace)
        assert {(e.vector.f1, e.vector.f2) for e in log.final_archive} == expected

    def test_deterministic(self, toy6, table6_rugged):
        a = run_nsga2(toy6, table6_rugged, budget=200, seed=7, population_size=20)
        b = run_nsga2(toy6, table6_rugged, budget=200, seed=7, population_size=20)
        assert a.trace == b.trace


class TestLinkageTree:
    def test_fos_shape_three_variables(self):
        genotypes = [(0, 0, 1), (1, 1, 0), (2, 2, 1), (0, 1, 2)]
        tree = learn_linkage_tree(genotypes)
        assert len(tree.subsets) == 4
        assert {(0,), (1,), (2,)} <= set(tree.subsets)
        assert (0, 1, 2) not in tree.subsets

    def test_fos_size_formula(self):
        rng = np.random.default_rng(4)
        genotypes = [tuple(int(x) for x in rng.integers(0, 3, size=14)) for _ in range(20)]
        tree = learn_linkage_tree(genotypes)
        assert len(tree.subsets) == 2 * 14 - 2

    def test_identical_columns_merge_first(self):
        # columns 0 and 1 identical; column 2 unrelated
        genotypes = [(0, 0, 1), (1, 1, 0), (2, 2, 1), (0, 0, 2)]
        tree = learn_linkage_tree(genotypes)
        assert tree.subsets[3] == (0, 1)
        # hand-computed mutual information of two identical columns with
        # empirical distribution (1/2, 1/4, 1/4): their shared entropy
        expected = -(0.5 * math.log(0.5) + 0.25 * math.log(0.25) * 2)
        assert tree.similarity[0, 1] == pytest.approx(expected)
        assert tree.similarity[0, 1] > tree.similarity[0, 2]
        assert tree.similarity[0, 1] > tree.similarity[1, 2]

    def test_constant_column_zero_information(self):
        genotypes = [(0, 0), (0, 1), (0, 2), (0, 1)]
        tree = learn_linkage_tree(genotypes)
        assert tree.similarity[0, 1] == pytest.approx(0.0)

    def test_requires_two_members(self):
        with pytest.raises(ValueError):
            learn_linkage_tree([(0, 1)])


class TestClustering:
    def test_every_member_assigned(self):
        rng = np.random.default_rng(5)
        vs = [ObjectiveVector(float(x), float(y)) for x, y in rng.random((23, 2))]
        c = cluster_population(vs, 5)
        assert len(c.assignment) == 23
        assert all(0 <= a < c.k for a in c.assignment)

    def test_extreme_flags_track_best_means(self):
        vs = [ObjectiveVector(0.9, 0.1), ObjectiveVector(0.85, 0.15),
              ObjectiveVector(0.1, 0.9), ObjectiveVector(0.15, 0.85),
              ObjectiveVector(0.5, 0.5), ObjectiveVector(0.55, 0.45),
              ObjectiveVector(0.45, 0.55), ObjectiveVector(0.6, 0.4),
              ObjectiveVector(0.4, 0.6), ObjectiveVector(0.3, 0.7)]
        c = cluster_population(vs, 5)
        assert c.centroids[c.extreme_f1, 0] == max(c.centroids[:, 0])
        assert c.centroids[c.extreme_f2, 1] == max(c.centroids[:, 1])

    def test_small_population_degrades_to_three_chunks(self):
        vs = [ObjectiveVector(x / 7, 1 - x / 7) for x in range(8)]
        c = cluster_population(vs, 5)
        assert c.k == 3
        assert c.extreme_f1 != c.extreme_f2


class TestMoGomea:
    def test_small_budget_runs_first_population_only(self, toy6, table6_rugged):
        log = run_mo_gomea(toy6, table6_rugged, budget=10, seed=2)
        assert log.unique_count == 10
        vs = [e.vector for e in log.final_archive]
        assert len(vs) >= 1
        assert not any(dominates(a, b) for a in vs for b in vs if a is not b)

    def test_copy_subset_no_change_short_circuit(self):
        m = Individual((0, 1, 2), ObjectiveVector(0.5, 0.5))
        d = Individual((0, 1, 0), ObjectiveVector(0.4, 0.4))
        assert _copy_subset(m, d, (0, 1)) is None
        assert _copy_subset(m, d, (2,)) == (0, 1, 0)

    def test_acceptance_rule_never_keeps_dominated(self):
        member = ObjectiveVector(0.5, 0.5)
        dominated = ObjectiveVector(0.4, 0.5)
        assert not gom_accepts(dominated, member, archived=False, flagged_objectives=())
        assert gom_accepts(ObjectiveVector(0.6, 0.5), member, False, ())
        assert gom_accepts(member, member, False, ())
        assert gom_accepts(ObjectiveVector(0.1, 0.1), member, True, ())
        assert gom_accepts(ObjectiveVector(0.6, 0.1), member, False, (0,))
        assert not gom_accepts(ObjectiveVector(0.5, 0.1), member, False, (0,))

    def test_archive_matches_replay_maxima(self, toy6, table6_rugged):
        log = run_mo_gomea(toy6, table6_rugged, budget=300, seed=6)
        expected = brute_force_maxima((t.f1, t.f2) for t in log.trace)
        assert {(e.vector.f1, e.vector.f2) for e in log.final_archive} == expected

    def test_deterministic(self, toy6, table6_rugged):
        a = run_mo_gomea(toy6, table6_rugged, budget=200, seed=8)
        b = run_mo_gomea(toy6, table6_rugged, budget=200, seed=8)
        assert a.trace == b.trace

    def test_trivial_net_in_every_population(self, toy6, table6_rugged):
        log = run_mo_gomea(toy6, table6_rugged, budget=50, seed=1)
        assert log.trace[0].key == "000000"


class TestGa:
    def test_stagnates_without_mutation(self, toy6, table6_rugged):
        log = run_ga(toy6, table6_rugged, budget=5000, seed=3, mutation_rate=0.0,
                     stall_limit=50)
        assert log.truncated
        assert log.unique_count < 5000

    def test_best_so_far_nondecreasing(self, toy6, table6_rugged):
        log = run_ga(toy6, table6_rugged, budget=400, seed=4)
        best = -1.0
        for t in log.trace:
            best = max(best, t.f1)
        assert best == max(t.f1 for t in log.trace)

    def test_deterministic(self, toy6, table6_rugged):
        a = run_ga(toy6, table6_rugged, budget=300, seed=5)
        b = run_ga(toy6, table6_rugged, budget=300, seed=5)
        assert a.trace == b.trace


class TestGomea:
    def test_finds_separable_optimum(self, toy6, table6_separable):
        log = run_gomea(toy6, table6_separable, budget=2000, seed=1)
        assert max(t.f1 for t in log.trace) == float(table6_separable.acc_val.max())

    def test_acceptance_never_decreases_best(self, toy6, table6_rugged):
        log = run_gomea(toy6, table6_rugged, budget=500, seed=2)
        assert max(t.f1 for t in log.trace) >= log.trace[0].f1

    def test_budget_accounting_shared_contract(self, toy6, table6_rugged):
        log = run_gomea(toy6, table6_rugged, budget=137, seed=3)
        assert log.unique_count == 137
        assert [t.eval_index for t in log.trace] == list(range(1, 138))

    def test_deterministic(self, toy6, table6_rugged):
        a = run_gomea(toy6, table6_rugged, budget=250, seed=6)
        b = run_gomea(toy6, table6_rugged, budget=250, seed=6)
        assert a.trace == b.trace
