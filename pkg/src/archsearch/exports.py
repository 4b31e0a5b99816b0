"""CSV exports consumed by the standalone plotting scripts."""

from __future__ import annotations

import glob
import hashlib
import json
import os
import re
from typing import Iterable, Optional, Sequence

from .pareto import ObjectiveVector
from .runlog import RunLog
from .stats import complexity_trace, metric_series


def load_all_runs(logs_dir) -> list[RunLog]:
    ids = []
    for path in sorted(glob.glob(os.path.join(logs_dir, "run_*.json"))):
        m = re.match(r"run_(.+)\.json$", os.path.basename(path))
        if m:
            ids.append(m.group(1))
    if not ids:
        raise FileNotFoundError(f"no run logs found in {logs_dir}")
    return [RunLog.load(logs_dir, rid) for rid in ids]


def export_convergence(logs: Sequence[RunLog], out_dir, metrics: Iterable[str] = ("hv_val", "hv_test"),
                       reference: Optional[Sequence[ObjectiveVector]] = None) -> list[str]:
    """Long-format per-run metric values: algorithm,run_id,snapshot,value."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for metric in metrics:
        path = os.path.join(out_dir, f"convergence_{metric}.csv")
        rows = []
        for log in logs:
            for point, value in metric_series(log, metric, reference):
                rows.append((log.algorithm, log.run_id, point, value))
        rows.sort()
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("algorithm,run_id,snapshot,value\n")
            for algo, rid, point, value in rows:
                fh.write(f"{algo},{rid},{point},{value!r}\n")
        written.append(path)
    return written


def export_fronts(logs: Sequence[RunLog], out_dir) -> list[str]:
    """Archive dumps of one example run per algorithm, per snapshot."""
    os.makedirs(out_dir, exist_ok=True)
    by_algo: dict[str, RunLog] = {}
    for log in sorted(logs, key=lambda l: l.run_id):
        by_algo.setdefault(log.algorithm, log)
    written = []
    for algo, log in sorted(by_algo.items()):
        for point in sorted(log.snapshots):
            path = os.path.join(out_dir, f"front_{algo}_{point}.csv")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("canonical_key,f1,f2,acc_test,eval_index\n")
                for e in log.snapshots[point]:
                    fh.write(
                        f"{e.key},{e.vector.f1!r},{e.vector.f2!r},"
                        f"{e.acc_test!r},{e.eval_index}\n"
                    )
            written.append(path)
    return written


def export_trace(logs: Sequence[RunLog], out_dir, window: int = 75) -> list[str]:
    """Raw plus smoothed complexity per run: eval_index,complexity,smoothed."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for log in sorted(logs, key=lambda l: l.run_id):
        smoothed = complexity_trace(log, window)
        path = os.path.join(out_dir, f"trace_smoothed_{log.run_id}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# algorithm={log.algorithm} window={window}\n")
            fh.write("eval_index,complexity,smoothed\n")
            for t, s in zip(log.trace, smoothed):
                fh.write(f"{t.eval_index},{t.complexity!r},{float(s)!r}\n")
        written.append(path)
    return written


def write_export_meta(logs_dir, out_dir) -> str:
    """Combined hash of the generating configs, for figure footers."""
    hashes = []
    for path in sorted(glob.glob(os.path.join(logs_dir, "config_*.json"))):
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        hashes.append(data.get("config_hash", ""))
    digest = hashlib.sha256("|".join(hashes).encode()).hexdigest()[:12] if hashes else ""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "export_meta.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump({"config_hash": digest, "source_hashes": hashes}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return digest
