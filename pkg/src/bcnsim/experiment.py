"""Experiment orchestration: sweep expansion, replica aggregation, and
plot-ready CSV/JSON serialization.

Outputs per experiment:
  summary.json  one entry per sweep point: config, per-replica summaries,
                aggregate mean/standard-error statistics
  slots.csv     per-slot metrics of every replica of every point
  sweep.csv     one row per sweep point with aggregated scalars

File contents are deterministic given the seed. Column layouts are fixed
(see _slot_header / _sweep_header).
"""

import csv
import json
import os
from dataclasses import asdict

import numpy as np

from .config import ExperimentSpec, NetworkConfig
from .sim import RunResult, RunSummary, run_replicas

__all__ = ["run_experiment", "aggregate", "write_slots_csv", "write_sweep_csv"]


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def aggregate(summaries: list[RunSummary]) -> dict:
    """Mean and standard error of the scalar summary fields across
    replicas, plus per-node mean vectors."""
    def stats(values):
        a = np.asarray(values, dtype=float)
        se = a.std(ddof=1) / np.sqrt(a.size) if a.size > 1 else 0.0
        return {"mean": float(a.mean()), "se": float(se)}

    out = {
        "replicas": len(summaries),
        "avg_utility": stats([s.avg_utility for s in summaries]),
        "avg_queue": stats([s.avg_queue for s in summaries]),
        "avg_utility_steady": stats([s.avg_utility_steady for s in summaries]),
        "avg_queue_steady": stats([s.avg_queue_steady for s in summaries]),
        "mean_iterations": stats([s.mean_iterations for s in summaries]),
        "max_queue_seen": float(max(s.max_queue_seen for s in summaries)),
        "per_bn_throughput_mean": np.mean(
            [s.per_bn_throughput for s in summaries], axis=0
        ).tolist(),
        "per_bn_throughput_steady_mean": np.mean(
            [s.per_bn_throughput_steady for s in summaries], axis=0
        ).tolist(),
        "per_bn_energy_mean": np.mean(
            [s.per_bn_energy for s in summaries], axis=0
        ).tolist(),
        "per_bn_energy_steady_mean": np.mean(
            [s.per_bn_energy_steady for s in summaries], axis=0
        ).tolist(),
    }
    return out


def _summary_dict(s: RunSummary) -> dict:
    d = asdict(s)
    for k, v in d.items():
        if isinstance(v, np.ndarray):
            d[k] = v.tolist()
    return d


def _slot_header(n: int) -> list[str]:
    cols = ["point", "replica", "slot", "utility", "iterations", "lyapunov",
            "dpp_service", "dpp_admit", "dpp_penalty"]
    for group in ("rate", "admit", "queue", "served", "energy"):
        cols += [f"{group}_{i + 1}" for i in range(n)]
    return cols


def write_slots_csv(path: str, results_by_point: list[list[RunResult]]) -> None:
    n = results_by_point[0][0].config.num_bns
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_slot_header(n))
        for point, results in enumerate(results_by_point):
            for res in results:
                log = res.log
                if log is None:
                    continue
                for t in range(log.num_slots):
                    row = [
                        point, res.summary.replica, t,
                        _fmt(log.utility[t]), int(log.iterations[t]),
                        _fmt(log.lyapunov[t]), _fmt(log.dpp_service[t]),
                        _fmt(log.dpp_admit[t]), _fmt(log.dpp_penalty[t]),
                    ]
                    for arr in (log.rates, log.admissions, log.queues_after,
                                log.served, log.energy):
                        row += [_fmt(v) for v in arr[t]]
                    writer.writerow(row)


def _sweep_header(sweep_names: list[str]) -> list[str]:
    return sweep_names + [
        "replicas",
        "avg_utility_mean", "avg_utility_se",
        "avg_queue_mean", "avg_queue_se",
        "avg_utility_steady_mean", "avg_utility_steady_se",
        "avg_queue_steady_mean", "avg_queue_steady_se",
        "mean_iterations_mean", "max_queue_seen",
    ]


def write_sweep_csv(
    path: str,
    spec: ExperimentSpec,
    points: list[NetworkConfig],
    aggregates: list[dict],
) -> None:
    names = [name for name, _ in spec.sweep]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_sweep_header(names))
        for cfg, agg in zip(points, aggregates):
            row = [getattr(cfg, name) for name in names]
            row += [
                agg["replicas"],
                _fmt(agg["avg_utility"]["mean"]), _fmt(agg["avg_utility"]["se"]),
                _fmt(agg["avg_queue"]["mean"]), _fmt(agg["avg_queue"]["se"]),
                _fmt(agg["avg_utility_steady"]["mean"]),
                _fmt(agg["avg_utility_steady"]["se"]),
                _fmt(agg["avg_queue_steady"]["mean"]),
                _fmt(agg["avg_queue_steady"]["se"]),
                _fmt(agg["mean_iterations"]["mean"]),
                _fmt(agg["max_queue_seen"]),
            ]
            writer.writerow(row)


def run_experiment(spec: ExperimentSpec) -> int:
    """Execute all sweep points x replicas and write the requested files.

    Returns 0 on success; a controller invariant failure raises (the CLI
    maps that to a nonzero exit).
    """
    points = spec.points()
    keep_logs = "slots_csv" in spec.emit
    results_by_point: list[list[RunResult]] = [
        run_replicas(cfg, keep_logs=keep_logs) for cfg in points
    ]
    aggregates = [aggregate([r.summary for r in results]) for results in results_by_point]

    os.makedirs(spec.output_dir, exist_ok=True)
    if "summary_json" in spec.emit:
        doc = []
        for cfg, results, agg in zip(points, results_by_point, aggregates):
            doc.append({
                "config": asdict(cfg),
                "aggregate": agg,
                "replicas": [_summary_dict(r.summary) for r in results],
            })
        with open(os.path.join(spec.output_dir, "summary.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if "slots_csv" in spec.emit:
        write_slots_csv(os.path.join(spec.output_dir, "slots.csv"), results_by_point)
    if "sweep_csv" in spec.emit:
        write_sweep_csv(
            os.path.join(spec.output_dir, "sweep.csv"), spec, points, aggregates
        )
    return 0
