"""Benchmark orchestration: (instance, ell, variant, algorithm) cells to result rows."""

from __future__ import annotations

import json
import logging
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from statistics import mean
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .fileio import RecordWriter, parse_graph
from .graph import Graph
from .metrics import MetricsRecord, bound_quality, compute_metrics
from .oracle import DEFAULT_CAP, brute_force_opt
from .reductions import Variant
from .solver import Algorithm, Instance, SolverConfig, solve

log = logging.getLogger(__name__)

DEFAULT_ELLS = [1, 2, 3, 4, 5, 6, 7, 9, 11, 13, 15, *range(20, 95, 5), 100]
DEFAULT_TIME_LIMIT = 3600.0
BUCKETS = (("ell<=5", 0, 5), ("6<=ell<=15", 6, 15), ("ell>=16", 16, None))


def bucket_of(ell: int) -> str:
    for name, lo, hi in BUCKETS:
        if ell >= lo and (hi is None or ell <= hi):
            return name
    raise ValueError(ell)


@dataclass
class RunConfig:
    inputs: List[str]
    ells: List[int] = field(default_factory=lambda: list(DEFAULT_ELLS))
    variants: List[str] = field(default_factory=lambda: ["vertex", "edge"])
    algorithms: List[str] = field(default_factory=lambda: [a.value for a in Algorithm])
    time_limit: Optional[float] = DEFAULT_TIME_LIMIT
    density_threshold: float = 0.05
    exact_matching: bool = False
    workers: int = 1
    output: Optional[str] = None
    fmt: str = "csv"
    oracle_check: bool = False
    oracle_cap: int = DEFAULT_CAP

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("at least one input is required")
        if any(ell < 0 for ell in self.ells):
            raise ValueError("ell values must be nonnegative")
        self.variants = [Variant(v).value for v in self.variants]
        self.algorithms = [Algorithm(a).value for a in self.algorithms]
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            self.time_limit = None


def instance_name(path: str) -> str:
    name = Path(path).name
    for suffix in (".gz", ".edges", ".txt", ".mtx", ".el", ".dimacs", ".clq", ".col"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
    return name


@dataclass
class CellResult:
    record: MetricsRecord
    labels: List[str]
    oracle_size: Optional[int] = None

    @property
    def oracle_mismatch(self) -> bool:
        return self.oracle_size is not None and self.oracle_size != self.record.size


def run_cell(name: str, g: Graph, labels: Sequence[str], ell: int, variant: str, algorithm: str,
             cfg: RunConfig) -> CellResult:
    scfg = SolverConfig(algorithm, cfg.density_threshold, cfg.time_limit, cfg.exact_matching)
    sol = solve(Instance(g, ell, variant), scfg)
    st = sol.stats
    optimum = sol.size if sol.proven_optimal else None
    sm = compute_metrics(g, sol.vertices)
    record = MetricsRecord(
        instance=name,
        n=g.n,
        m=g.m,
        density=g.density(),
        ell=ell,
        variant=variant,
        algorithm=algorithm,
        size=sol.size,
        solve_time=st.wall_time,
        preprocessing_fraction=st.preprocessing_fraction,
        nlb_value=st.nlb_value,
        multilb_value=st.multilb_value,
        nlb_quality=bound_quality(st.nlb_value, optimum) if optimum is not None else None,
        multilb_quality=bound_quality(st.multilb_value, optimum) if optimum is not None else None,
        solution_density=sm.density,
        global_cc=sm.global_cc,
        min_local_cc=sm.min_local_cc,
        proven_optimal=sol.proven_optimal,
    )
    oracle_size = None
    if cfg.oracle_check and g.n <= cfg.oracle_cap:
        oracle_size = brute_force_opt(g.adj, ell, variant, cap=cfg.oracle_cap)[0]
    return CellResult(record, sorted(labels[v] for v in sol.vertices), oracle_size)


_worker_graphs: Dict[str, Tuple[Graph, List[str]]] = {}


def _load(path: str) -> Tuple[Graph, List[str]]:
    if path not in _worker_graphs:
        _worker_graphs.clear()
        _worker_graphs[path] = parse_graph(path)
    return _worker_graphs[path]


def _cell_task(args) -> CellResult:
    path, ell, variant, algorithm, cfg = args
    g, labels = _load(path)
    return run_cell(instance_name(path), g, labels, ell, variant, algorithm, cfg)


def iter_cells(cfg: RunConfig) -> Iterator[Tuple[str, int, str, str]]:
    for path in cfg.inputs:
        for ell in cfg.ells:
            for variant in cfg.variants:
                for algorithm in cfg.algorithms:
                    yield path, ell, variant, algorithm


def _results(cfg: RunConfig) -> Iterator[CellResult]:
    cells = list(iter_cells(cfg))
    if cfg.workers == 1:
        for path, ell, variant, algorithm in cells:
            g, labels = _load(path)
            yield run_cell(instance_name(path), g, labels, ell, variant, algorithm, cfg)
        return
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        # map preserves submission order, so rows come out in cell order
        yield from pool.map(_cell_task, [(*c, cfg) for c in cells])


def summarize(records: Sequence[MetricsRecord]) -> dict:
    """Solved counts per algorithm and average lower-bound quality per ell bucket.

    Quality averages use proven-optimal cells with a nonempty optimum only.
    """
    solved = defaultdict(int)
    cells = defaultdict(int)
    times = defaultdict(list)
    quality = defaultdict(lambda: defaultdict(list))
    for r in records:
        cells[r.algorithm] += 1
        if r.proven_optimal:
            solved[r.algorithm] += 1
            times[r.algorithm].append(r.solve_time)
            if r.size > 0:
                key = f"{r.variant}/{bucket_of(r.ell)}"
                for bound in ("nlb", "multilb"):
                    q = getattr(r, f"{bound}_quality")
                    if q is not None:
                        quality[key][bound].append(q)
    return {
        "cells": dict(cells),
        "solved": dict(solved),
        "solved_times": {a: sorted(ts) for a, ts in times.items()},
        "lb_quality": {
            key: {b: {"mean": mean(qs), "count": len(qs)} for b, qs in by.items()}
            for key, by in sorted(quality.items())
        },
    }


def run_benchmark(cfg: RunConfig) -> dict:
    """Run every cell, streaming rows to ``cfg.output`` (and sidecars), and return the summary.

    Sidecars next to the output: ``<output>.summary.json`` and
    ``<output>.solutions.jsonl`` (vertex labels of each solution).
    """
    records: List[MetricsRecord] = []
    mismatches = []
    writer = RecordWriter(cfg.output, cfg.fmt) if cfg.output else None
    solutions = open(f"{cfg.output}.solutions.jsonl", "w", encoding="utf-8", buffering=1) if cfg.output else None
    start = time.perf_counter()
    try:
        for res in _results(cfg):
            r = res.record
            records.append(r)
            log.info("%s ell=%d %s %s: size %d in %.2fs%s", r.instance, r.ell, r.variant, r.algorithm,
                     r.size, r.solve_time, "" if r.proven_optimal else " (time limit)")
            if res.oracle_mismatch:
                mismatches.append({"instance": r.instance, "ell": r.ell, "variant": r.variant,
                                   "algorithm": r.algorithm, "solver": r.size, "oracle": res.oracle_size})
                log.error("oracle mismatch: %s", mismatches[-1])
            if writer:
                writer.write(r)
            if solutions:
                solutions.write(json.dumps({"instance": r.instance, "ell": r.ell, "variant": r.variant,
                                            "algorithm": r.algorithm, "vertices": res.labels}) + "\n")
    finally:
        if writer:
            writer.close()
        if solutions:
            solutions.close()
    summary = summarize(records)
    summary["oracle_mismatches"] = mismatches
    summary["wall_time"] = time.perf_counter() - start
    if cfg.output:
        with open(f"{cfg.output}.summary.json", "w", encoding="utf-8") as f:
            json.dump(summary, f, indent=2, sort_keys=True)
    summary["records"] = records
    return summary
