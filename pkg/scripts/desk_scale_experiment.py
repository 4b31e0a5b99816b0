#!/usr/bin/env python3
"""Desk-scale multi-objective comparison: RS, LS, NSGA-II, MO-GOMEA.

Generates a synthetic benchmark table, runs every algorithm for the same
unique-evaluation budget, writes logs plus plot-ready exports, and prints
the pairwise rank tests at the final snapshot.
"""

import argparse
import os
import sys

from archsearch import (
    ExperimentConfig,
    SyntheticSpec,
    exhaustive_pareto_front,
    generate_synthetic,
    hypervolume,
    load_space,
    run_experiment,
    save_table,
)
from archsearch.exports import (
    export_convergence,
    export_fronts,
    export_trace,
    load_all_runs,
    write_export_meta,
)
from archsearch.stats import metric_series, pairwise_tests


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--space", default="macronas")
    parser.add_argument("--table-seed", type=int, default=1)
    parser.add_argument("--ruggedness", type=float, default=0.3)
    parser.add_argument("--budget", type=int, default=10_000)
    parser.add_argument("--repetitions", type=int, default=30)
    parser.add_argument("--base-seed", type=int, default=500)
    parser.add_argument("--out", default="results/desk_scale")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    space = load_space(args.space)
    table_path = os.path.join(args.out, "table.csv")
    table = generate_synthetic(space, args.table_seed, args.ruggedness)
    save_table(table, table_path)
    front = exhaustive_pareto_front(table)
    with open(os.path.join(args.out, "true_front.csv"), "w", encoding="utf-8") as fh:
        fh.write("canonical_key,f1,f2\n")
        for key, vec in front:
            fh.write(f"{key},{vec.f1!r},{vec.f2!r}\n")
    print(f"table: {len(table)} architectures, true front: {len(front)} points")

    logs_dir = os.path.join(args.out, "logs")
    snapshots = sorted({10, 100, 1000, args.budget} & set(range(1, args.budget + 1))
                       | {min(args.budget, p) for p in (10, 100, 1000)})
    for algorithm in ("rs", "ls", "nsga2", "mogomea"):
        config = ExperimentConfig(
            space=args.space,
            algorithm=algorithm,
            budget=args.budget,
            repetitions=args.repetitions,
            base_seed=args.base_seed,
            table=table_path,
            snapshots=sorted(snapshots),
            output_dir=logs_dir,
        )
        run_experiment(config, workers=args.workers)
        print(f"{algorithm}: {args.repetitions} runs complete")

    logs = load_all_runs(logs_dir)
    samples = {}
    for log in logs:
        series = dict(metric_series(log, "hv_val"))
        samples.setdefault(log.algorithm, []).append(series[args.budget])
    print(f"\nhypervolume at {args.budget} unique evaluations:")
    for algo in sorted(samples):
        import numpy as np

        print(f"  {algo:8s} median {np.median(samples[algo]):.4f}")
    print("\npairwise Mann-Whitney-U (Bonferroni adjusted):")
    for r in pairwise_tests(samples, "hv_val", args.budget):
        mark = "*" if r.significant else " "
        print(f"  {r.algorithm_a:8s} vs {r.algorithm_b:8s} p_adj={r.p_adjusted:.3g} {mark}")

    export_dir = os.path.join(args.out, "export")
    export_convergence(logs, export_dir, ("hv_val", "hv_test"))
    export_fronts(logs, export_dir)
    export_trace(logs, export_dir, window=75)
    write_export_meta(logs_dir, export_dir)
    print(f"\nexports written to {export_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
