"""Command-line interface for table generation, runs, statistics, and exports."""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys

import numpy as np

from .benchmark import (
    BenchmarkTable,
    ObjectiveSpec,
    TableError,
    exhaustive_pareto_front,
    generate_synthetic,
    load_table,
    save_table,
)
from .exports import (
    export_convergence,
    export_fronts,
    export_trace,
    load_all_runs,
    write_export_meta,
)
from .experiment import ExperimentConfig, run_experiment
from .pareto import ObjectiveVector, epsilon_threshold, hypervolume, igd, pareto_maxima
from .spaces import load_space, random_genotype, canonicalize, canonical_key
from .stats import pairwise_tests, success_rate_curve

_SUCCESS_SAMPLE_TAG = 301


def _load_reference_front(path) -> list[ObjectiveVector]:
    points = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        try:
            i1, i2 = header.index("f1"), header.index("f2")
        except ValueError as exc:
            raise ValueError(f"{path}: no f1/f2 columns") from exc
        for line in fh:
            parts = line.rstrip("\n").split(",")
            points.append(ObjectiveVector(float(parts[i1]), float(parts[i2])))
    if not points:
        raise ValueError(f"{path}: empty front")
    return points


def _space_from_logs(logs_dir) -> str:
    configs = sorted(glob.glob(os.path.join(logs_dir, "config_*.json")))
    if not configs:
        raise FileNotFoundError(f"no config_*.json in {logs_dir}")
    with open(configs[0], "r", encoding="utf-8") as fh:
        return json.load(fh)["space"]


def _cmd_gen_synthetic(args) -> int:
    space = load_space(args.space)
    table = generate_synthetic(space, args.seed, args.ruggedness)
    save_table(table, args.out)
    print(f"wrote {len(table)} architectures to {args.out}")
    return 0


def _cmd_front(args) -> int:
    if args.space:
        space = load_space(args.space)
        table = load_table(args.table, space)
        front = exhaustive_pareto_front(table)
    else:
        # without a space description the rows are trusted as canonical and
        # completeness cannot be verified
        table = _load_table_lenient(args.table)
        front = _raw_front(table)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("canonical_key,f1,f2\n")
        for key, vec in front:
            fh.write(f"{key},{vec.f1!r},{vec.f2!r}\n")
    print(f"front of {len(front)} points written to {args.out}")
    return 0


def _load_table_lenient(path):
    rows = []
    spec = None
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first.startswith("#"):
            import re

            m = re.match(
                r"^#\s*complexity_kind=(\w+)\s+complexity_min=(\S+)\s+complexity_max=(\S+)\s*$",
                first,
            )
            if not m:
                raise TableError(f"malformed metadata line: {first!r}")
            spec = ObjectiveSpec(float(m.group(2)), float(m.group(3)), m.group(1))
            first = fh.readline().rstrip("\n")
        if first != "genotype,acc_val,acc_test,complexity":
            raise TableError(f"unexpected header {first!r}")
        for line in fh:
            key, acc_val, acc_test, comp = line.rstrip("\n").split(",")
            rows.append((key, float(acc_val), float(acc_test), float(comp)))
    if not rows:
        raise TableError("table has no rows")
    if spec is None:
        comps = [r[3] for r in rows]
        spec = ObjectiveSpec(min(comps), max(comps), "mmacs")
    return rows, spec


def _raw_front(table_and_spec):
    rows, spec = table_and_spec
    span = spec.complexity_max - spec.complexity_min
    pts = []
    for key, acc_val, _, comp in rows:
        f2 = 1.0 - (comp - spec.complexity_min) / span
        f2 = min(1.0, max(0.0, f2))
        pts.append((key, ObjectiveVector(acc_val, f2)))
    front = []
    maxima = set(pareto_maxima([p[1] for p in pts]))
    seen = set()
    for key, vec in sorted(pts, key=lambda p: (p[1].f1, p[1].f2, p[0])):
        if (vec.f1, vec.f2) in maxima and (vec.f1, vec.f2) not in seen:
            front.append((key, vec))
            seen.add((vec.f1, vec.f2))
    return front


def _cmd_run(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    logs = run_experiment(config, workers=args.workers)
    truncated = sum(1 for log in logs if log.truncated)
    print(f"{len(logs)} runs written to {config.output_dir}"
          + (f" ({truncated} truncated)" if truncated else ""))
    return 0


def _cmd_stats(args) -> int:
    logs = load_all_runs(args.logs)
    reference = _load_reference_front(args.reference) if args.reference else None
    from .stats import metric_series

    samples: dict[str, list[float]] = {}
    for log in logs:
        series = dict(metric_series(log, args.metric, reference))
        if args.at not in series:
            raise ValueError(f"run {log.run_id} has no snapshot at {args.at}")
        samples.setdefault(log.algorithm, []).append(series[args.at])
    results = pairwise_tests(samples, args.metric, args.at)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("algorithm_a,algorithm_b,metric,snapshot,n_a,n_b,"
                 "median_a,median_b,u,p,p_adjusted,significant\n")
        for r in results:
            fh.write(
                f"{r.algorithm_a},{r.algorithm_b},{r.metric},{r.snapshot},"
                f"{r.n_a},{r.n_b},{r.median_a!r},{r.median_b!r},"
                f"{r.u!r},{r.p!r},{r.p_adjusted!r},{int(r.significant)}\n"
            )
    print(f"{len(results)} pairwise tests written to {args.out}")
    return 0


def _cmd_success(args) -> int:
    logs = load_all_runs(args.logs)
    space = load_space(args.space or _space_from_logs(args.logs))
    table = load_table(args.table, space)
    acc_star = float(table.acc_val.max())
    rng = np.random.default_rng([_SUCCESS_SAMPLE_TAG, args.sample_seed])
    total = 0.0
    for _ in range(args.samples):
        g = canonicalize(space, random_genotype(space, rng))
        total += table.lookup(canonical_key(space, g), g)[0]
    acc_bar = total / args.samples
    curve = success_rate_curve(logs, acc_star, acc_bar, args.eps)
    lines = ["eval_count,succeeded"] + [f"{t},{n}" for t, n in curve]
    out_text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out_text)
        threshold = epsilon_threshold(acc_star, acc_bar, args.eps)
        print(f"threshold {threshold!r}: curve written to {args.out}")
    else:
        sys.stdout.write(out_text)
    return 0


def _cmd_export(args) -> int:
    logs = load_all_runs(args.logs)
    reference = _load_reference_front(args.reference) if args.reference else None
    if args.what == "convergence":
        metrics = ["hv_val", "hv_test"] + (["igd"] if reference else [])
        written = export_convergence(logs, args.out, metrics, reference)
    elif args.what == "fronts":
        written = export_fronts(logs, args.out)
    elif args.what == "trace":
        written = export_trace(logs, args.out, args.window)
    else:
        raise ValueError(f"unknown export kind {args.what!r}")
    write_export_meta(args.logs, args.out)
    print(f"wrote {len(written)} files to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="archsearch",
        description="Multi-objective architecture search over benchmark tables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-synthetic", help="generate a synthetic benchmark table")
    p.add_argument("--space", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ruggedness", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_synthetic)

    p = sub.add_parser("front", help="exact Pareto front of a benchmark table")
    p.add_argument("--table", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--space", help="space JSON for validation and completeness checks")
    p.set_defaults(func=_cmd_front)

    p = sub.add_parser("run", help="execute a configured experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("stats", help="pairwise rank tests at a snapshot")
    p.add_argument("--logs", required=True)
    p.add_argument("--metric", choices=("hv_val", "hv_test", "igd"), default="hv_val")
    p.add_argument("--at", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--reference", help="reference front CSV (required for igd)")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("success", help="near-optimality success curve")
    p.add_argument("--logs", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--table", required=True)
    p.add_argument("--space", help="defaults to the space recorded in the logs dir")
    p.add_argument("--out")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--sample-seed", type=int, default=0)
    p.set_defaults(func=_cmd_success)

    p = sub.add_parser("export", help="CSV exports for the plotting scripts")
    p.add_argument("--logs", required=True)
    p.add_argument("--what", choices=("convergence", "fronts", "trace"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=75)
    p.add_argument("--reference", help="reference front CSV (adds igd to convergence)")
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
