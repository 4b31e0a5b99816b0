#!/usr/bin/env python3
"""Single-objective comparison (accuracy only): RS, LS, GA, GOMEA.

Runs each algorithm on a synthetic table and prints the number of runs
reaching the near-optimality bar for several epsilon values.
"""

import argparse
import os
import sys

import numpy as np

from archsearch import (
    ExperimentConfig,
    epsilon_threshold,
    generate_synthetic,
    load_space,
    run_experiment,
    save_table,
    success_rate_curve,
)
from archsearch.exports import load_all_runs
from archsearch.spaces import canonical_key, canonicalize, random_genotype


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--space", default="macronas")
    parser.add_argument("--table-seed", type=int, default=1)
    parser.add_argument("--ruggedness", type=float, default=0.0)
    parser.add_argument("--budget", type=int, default=2000)
    parser.add_argument("--repetitions", type=int, default=100)
    parser.add_argument("--base-seed", type=int, default=700)
    parser.add_argument("--out", default="results/single_objective")
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    space = load_space(args.space)
    table = generate_synthetic(space, args.table_seed, args.ruggedness)
    table_path = os.path.join(args.out, "table.csv")
    save_table(table, table_path)

    acc_star = float(table.acc_val.max())
    rng = np.random.default_rng(0)
    sampled = [
        table.lookup(canonical_key(space, canonicalize(space, random_genotype(space, rng))), None)[0]
        for _ in range(1000)
    ]
    acc_bar = float(np.mean(sampled))
    print(f"optimum acc_val {acc_star:.4f}, random-sample mean {acc_bar:.4f}")

    logs_dir = os.path.join(args.out, "logs")
    for algorithm in ("rs", "ls", "ga", "gomea"):
        config = ExperimentConfig(
            space=args.space,
            algorithm=algorithm,
            mode="single",
            budget=args.budget,
            repetitions=args.repetitions,
            base_seed=args.base_seed,
            table=table_path,
            output_dir=logs_dir,
        )
        run_experiment(config)
        print(f"{algorithm}: {args.repetitions} runs complete")

    logs = load_all_runs(logs_dir)
    breakpoints = sorted({t for t in (100, 500, 1000, args.budget) if t <= args.budget})
    print(f"\nruns (of {args.repetitions}) at the near-optimality bar, by budget:")
    for eps in (0.0, 0.05, 0.10):
        bar = epsilon_threshold(acc_star, acc_bar, eps)
        print(f"  eps={eps:4.2f} (acc_val >= {bar:.4f})")
        for algorithm in ("rs", "ls", "ga", "gomea"):
            algo_logs = [log for log in logs if log.algorithm == algorithm]
            curve = dict(success_rate_curve(algo_logs, acc_star, acc_bar, eps))
            print(f"    {algorithm:6s} "
                  + "  ".join(f"@{t}:{curve.get(t, 0)}" for t in breakpoints))
    return 0


if __name__ == "__main__":
    sys.exit(main())
