from itertools import product

import numpy as np
import pytest

from archsearch import (
    EvaluationCache,
    LocalSearchConfig,
    canonical_key,
    canonicalize,
    count_distinct_architectures,
    objectives,
    run_local_search,
    run_random_search,
    scalarize,
    seed_genotype,
    trivial_genotype,
)
from archsearch.local_search import local_search_pass, local_search_restart
from archsearch.runlog import RunRecorder


def brute_force_maxima(points):
    pts = set(points)
    return {
        p
        for p in pts
        if not any(q != p and q[0] >= p[0] and q[1] >= p[1] for q in pts)
    }


def scalarized_table_values(table, alpha):
    spec = table.objective_spec
    span = spec.complexity_max - spec.complexity_min
    f2 = np.clip(1.0 - (table.complexity - spec.complexity_min) / span, 0.0, 1.0)
    f1 = np.clip(table.acc_val, 0.0, 1.0)
    return alpha * f1 + (1.0 - alpha) * f2


class TestRandomSearch:
    def test_budget_one_archive_is_trivial_net(self, macronas, macronas_table_rugged):
        log = run_random_search(macronas, macronas_table_rugged, budget=1, seed=0)
        assert log.unique_count == 1
        assert [e.key for e in log.final_archive] == [
            canonical_key(macronas, trivial_genotype(macronas))
        ]

    def test_archive_matches_replay_maxima(self, toy6, table6_rugged):
        log = run_random_search(toy6, table6_rugged, budget=120, seed=4)
        expected = brute_force_maxima((t.f1, t.f2) for t in log.trace)
        assert {(e.vector.f1, e.vector.f2) for e in log.final_archive} == expected

    def test_budget_beyond_space_truncates(self, toy4, table6_rugged):
        from archsearch import generate_synthetic

        table = generate_synthetic(toy4, seed=5, ruggedness=0.2)
        cap = count_distinct_architectures(toy4)
        log = run_random_search(toy4, table, budget=cap + 20, seed=1)
        assert log.truncated
        assert log.unique_count == cap

    def test_deterministic(self, toy6, table6_rugged):
        a = run_random_search(toy6, table6_rugged, budget=200, seed=9)
        b = run_random_search(toy6, table6_rugged, budget=200, seed=9)
        assert a.trace == b.trace
        assert a.final_archive == b.final_archive

    def test_encoding_sampling_probability_denominator(self, macronas):
        from archsearch import encoding_count

        assert encoding_count(macronas) == 3**14  # P(full-identity draw) = 1 / 3^14


class TestLocalSearchPass:
    def test_pass_budget_bound(self, macronas, macronas_table_rugged):
        bound = 1 + sum(a - 1 for a in macronas.alphabet_sizes)
        assert bound == 29
        recorder = RunRecorder(macronas_table_rugged, budget=10_000)
        rng = np.random.default_rng(3)
        for _ in range(40):
            before = recorder.unique_count
            local_search_restart(macronas, recorder, rng, alpha=float(rng.uniform()))
            assert recorder.unique_count - before <= bound

    def test_single_pass_reaches_separable_optimum(self, toy6, table6_separable):
        # exhaustive: every start, several fixed scalarization weights
        for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
            best = float(scalarized_table_values(table6_separable, alpha).max())
            recorder = RunRecorder(table6_separable, budget=10**9)
            rng = np.random.default_rng(11)
            cache = EvaluationCache()
            for start in product(range(3), repeat=6):
                start_value = scalarize(
                    alpha, objectives(table6_separable, start, cache)
                )
                _, value = local_search_pass(
                    toy6, recorder, rng, alpha, start, start_value
                )
                assert value == pytest.approx(best, abs=1e-12)

    def test_pass_never_worsens(self, toy6, table6_rugged):
        rng = np.random.default_rng(14)
        recorder = RunRecorder(table6_rugged, budget=10**9)
        cache = EvaluationCache()
        for _ in range(100):
            start = tuple(int(x) for x in rng.integers(0, 3, size=6))
            alpha = float(rng.uniform())
            start_value = scalarize(alpha, objectives(table6_rugged, start, cache))
            _, value = local_search_pass(toy6, recorder, rng, alpha, start, start_value)
            assert value >= start_value - 1e-15

    def test_single_variable_scan_takes_best_option(self):
        from conftest import make_space
        from archsearch import generate_synthetic

        space = make_space([1])
        table = generate_synthetic(space, seed=6, ruggedness=0.0)
        recorder = RunRecorder(table, budget=10**9)
        rng = np.random.default_rng(0)
        cache = EvaluationCache()
        start = (0,)
        value0 = scalarize(1.0, objectives(table, start, cache))
        final, value = local_search_pass(space, recorder, rng, 1.0, start, value0)
        all_values = {
            g: scalarize(1.0, objectives(table, (g,), cache)) for g in range(3)
        }
        assert value == max(all_values.values())
        assert all_values[final[0]] == value


class TestRunLocalSearch:
    def test_trivial_net_seeded_first(self, toy6, table6_rugged):
        log = run_local_search(toy6, table6_rugged, LocalSearchConfig("multi", 50, 2))
        assert log.trace[0].key == canonical_key(toy6, trivial_genotype(toy6))

    def test_alpha_one_mode_finds_accuracy_optimum_in_one_restart(
        self, toy6, table6_separable
    ):
        # seed + start + one full pass fits in 1 + 1 + 6 * 2 evaluations
        budget = 1 + 1 + sum(a - 1 for a in toy6.alphabet_sizes)
        log = run_local_search(
            toy6, table6_separable, LocalSearchConfig("single", budget, 7)
        )
        assert max(t.f1 for t in log.trace) == float(table6_separable.acc_val.max())

    def test_archive_matches_replay_maxima(self, toy6, table6_rugged):
        log = run_local_search(toy6, table6_rugged, LocalSearchConfig("multi", 300, 5))
        expected = brute_force_maxima((t.f1, t.f2) for t in log.trace)
        assert {(e.vector.f1, e.vector.f2) for e in log.final_archive} == expected

    def test_deterministic(self, toy6, table6_rugged):
        a = run_local_search(toy6, table6_rugged, LocalSearchConfig("multi", 250, 3))
        b = run_local_search(toy6, table6_rugged, LocalSearchConfig("multi", 250, 3))
        assert a.trace == b.trace
        assert a.snapshots == b.snapshots

    def test_budget_accounting(self, toy6, table6_rugged):
        log = run_local_search(toy6, table6_rugged, LocalSearchConfig("multi", 123, 1))
        assert log.unique_count == 123
        assert [t.eval_index for t in log.trace] == list(range(1, 124))

    def test_exhausts_small_space_with_truncation(self, toy4):
        from archsearch import generate_synthetic

        table = generate_synthetic(toy4, seed=5, ruggedness=0.2)
        cap = count_distinct_architectures(toy4)
        log = run_local_search(toy4, table, LocalSearchConfig("multi", cap + 50, 2))
        assert log.truncated
        assert log.unique_count == cap
