"""Seeded multi-trial comparison of the single-beetle and swarm searches."""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..bas import run_bas
from ..benchmarks.functions import goldstein_price_problem, michalewicz_problem, sphere_problem
from ..benchmarks.rc import load_dataset, rc_identification_problem
from ..bsas import run_bsas
from ..records import OptimizationError, RunRecord
from .config import ExperimentConfig

__all__ = [
    "TRIALS_HEADER",
    "TrialRow",
    "VariantStats",
    "Summary",
    "ExperimentReport",
    "build_problem",
    "run_trial",
    "run_experiment",
    "summarize",
    "write_outputs",
    "read_trials",
]

log = logging.getLogger(__name__)

TRIALS_HEADER = ("algorithm", "k", "seed", "f_best", "iterations", "evaluations", "wall_time_ms")

TrialRow = namedtuple("TrialRow", ["algorithm", "k", "seed", "f_best_final", "iterations",
                                   "evaluations", "wall_time_ms"])


def variant_label(algorithm: str, k: int) -> str:
    return "bas" if algorithm == "bas" else f"bsas_k{k}"


def build_problem(config: ExperimentConfig):
    """Return ``(problem, dataset_id)`` for the configured target."""
    p = config.problem
    if p.kind == "goldstein_price":
        return goldstein_price_problem(), "goldstein_price"
    if p.kind == "michalewicz":
        return michalewicz_problem(p.dimension), f"michalewicz_{p.dimension}d"
    if p.kind == "sphere":
        return sphere_problem(p.dimension), f"sphere_{p.dimension}d"
    path = config.dataset_path()
    dataset = load_dataset(path)
    digest = hashlib.sha256(path.read_bytes()).hexdigest()[:16]
    problem = rc_identification_problem(dataset, scale_band=p.scale_band,
                                        temperature_band=p.temperature_band, penalty=p.penalty)
    return problem, f"{path.name}:sha256={digest}"


def run_trial(problem, config: ExperimentConfig, algorithm: str, k: int, seed: int) -> RunRecord:
    """One run; objective failures come back as a record with ``error`` set."""
    try:
        if algorithm == "bas":
            return run_bas(problem, config.bas_config(), seed)
        return run_bsas(problem, config.bsas_config(k), seed)
    except OptimizationError as exc:
        log.warning("%s", exc)
        return exc.record


_worker_problem = None


def _init_worker(config):
    global _worker_problem
    _worker_problem, _ = build_problem(config)


def _worker_trial(args):
    config, algorithm, k, seed = args
    return run_trial(_worker_problem, config, algorithm, k, seed)


@dataclass(frozen=True)
class VariantStats:
    algorithm: str
    k: int
    label: str
    trials: int
    failures: int
    mean: float
    sd: float
    min: float
    max: float
    counts: tuple


@dataclass(frozen=True)
class Summary:
    bin_edges: tuple
    variants: tuple

    def by_label(self) -> dict:
        return {v.label: v for v in self.variants}

    def to_dict(self) -> dict:
        return {
            "bin_edges": list(self.bin_edges),
            "variants": [
                {**v.__dict__, "counts": list(v.counts)} for v in self.variants
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Summary":
        variants = tuple(VariantStats(**{**v, "counts": tuple(v["counts"])})
                         for v in data["variants"])
        return cls(tuple(data["bin_edges"]), variants)


def _final_value(r) -> float:
    return math.nan if getattr(r, "error", None) else float(r.f_best_final)


def summarize(records: Sequence, bin_count: int = 15) -> Summary:
    """Per-variant mean, population sd, range and shared-bin histogram of ``f_best_final``.

    Bins are equal width over the global range of all finite values. Records
    that carry an error, or whose final value is not finite, are counted as
    failures and left out.
    """
    if not records:
        raise ValueError("summarize needs at least one record")
    if int(bin_count) != bin_count or bin_count < 1:
        raise ValueError("bin_count must be a positive integer")
    groups: dict = {}
    for r in records:
        groups.setdefault((r.algorithm, int(r.k)), []).append(_final_value(r))
    finite = [v for vals in groups.values() for v in vals if math.isfinite(v)]
    if not finite:
        raise ValueError("no finite results to summarize")
    lo, hi = min(finite), max(finite)
    edges = np.histogram_bin_edges(finite, bins=int(bin_count), range=(lo, hi))

    order = sorted(groups, key=lambda key: (key[0] != "bas", key[0], key[1]))
    stats = []
    for algorithm, k in order:
        vals = np.array([v for v in groups[(algorithm, k)] if math.isfinite(v)])
        n_fail = len(groups[(algorithm, k)]) - vals.size
        if vals.size:
            counts, _ = np.histogram(vals, bins=edges)
            row = (float(vals.mean()), float(vals.std()), float(vals.min()), float(vals.max()))
        else:
            counts = np.zeros(int(bin_count), dtype=int)
            row = (math.nan,) * 4
        stats.append(VariantStats(algorithm, k, variant_label(algorithm, k),
                                  len(groups[(algorithm, k)]), n_fail, *row,
                                  tuple(int(c) for c in counts)))
    return Summary(tuple(float(e) for e in edges), tuple(stats))


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    dataset_id: str
    records: tuple
    summary: Summary

    def trials_for(self, algorithm: str, k: int = 1) -> list:
        return [r for r in self.records if r.algorithm == algorithm and r.k == k]

    def final_values(self, algorithm: str, k: int = 1) -> np.ndarray:
        return np.array([r.f_best_final for r in self.trials_for(algorithm, k)])


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None,
                   problem=None) -> ExperimentReport:
    """Run every variant for ``trials`` seeds ``base_seed + i``.

    Records come back ordered by variant then trial index regardless of
    ``workers``. ``problem`` overrides the configured target (single process
    only, since it may not be picklable).
    """
    exp = config.experiment
    workers = exp.workers if workers is None else int(workers)
    jobs = [(config, algorithm, k, exp.base_seed + i)
            for algorithm, k in config.variants() for i in range(exp.trials)]
    if problem is None:
        problem, dataset_id = build_problem(config)
    else:
        dataset_id = problem.name
        workers = 1
    log.info("running %d trials on %s with %d worker(s)", len(jobs), dataset_id, workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                 initargs=(config,)) as pool:
            records = list(pool.map(_worker_trial, jobs, chunksize=1))
    else:
        records = []
        for job in jobs:
            _, algorithm, k, seed = job
            records.append(run_trial(problem, config, algorithm, k, seed))
            log.debug("%s seed %d: %.6g", variant_label(algorithm, k), seed,
                      records[-1].f_best_final)
    return ExperimentReport(config, dataset_id, tuple(records),
                            summarize(records, exp.bin_count))


def _fmt(v) -> str:
    return repr(float(v))


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(path: Path, text: str):
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def summary_document(summary: Summary, dataset_id=None, bin_count=None) -> dict:
    doc = summary.to_dict()
    doc["dataset_id"] = dataset_id
    doc["bin_count"] = len(summary.bin_edges) - 1 if bin_count is None else bin_count
    return doc


def write_outputs(report: ExperimentReport, out_dir) -> dict:
    """Write ``trials.csv``, ``summary.json`` and ``config_snapshot.json``."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out_dir}: {exc.strerror or exc}") from exc
    lines = [",".join(TRIALS_HEADER)]
    for r in report.records:
        lines.append(",".join([r.algorithm, str(r.k), str(r.seed), _fmt(_final_value(r)),
                               str(r.iterations), str(r.evaluations), str(r.wall_time_ms)]))
    paths = {
        "trials": out_dir / "trials.csv",
        "summary": out_dir / "summary.json",
        "config": out_dir / "config_snapshot.json",
    }
    _write(paths["trials"], "\n".join(lines) + "\n")
    _write(paths["summary"], _dump_json(summary_document(
        report.summary, report.dataset_id, report.config.experiment.bin_count)))
    snapshot = {"config": report.config.to_dict(), "dataset_id": report.dataset_id}
    _write(paths["config"], _dump_json(snapshot))
    return paths


def read_trials(path) -> list[TrialRow]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != TRIALS_HEADER:
            raise ValueError(f"{path}: expected header {','.join(TRIALS_HEADER)}")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append(TrialRow(row[0], int(row[1]), int(row[2]), float(row[3]),
                                     int(row[4]), int(row[5]), int(row[6])))
            except (IndexError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: malformed row ({exc})") from exc
    return rows
