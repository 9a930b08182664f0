"""Sweep orchestration and metrics.

A sweep point builds an index at one (L, T, delta), answers a held-out
query set, and reports: the fraction of database vectors whose true
feature distance was evaluated, the table memory footprint in bits,
their product (total complexity), and the mean position error against
the exhaustive-search baseline on the same queries.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import SceneConfig, generate_scene, with_seed
from .errors import InvalidConfig, MalformedCsv
from .index import HashConfig, build_index, memory_bits
from .seeding import TAG_SCENE, derived_seed
from .store import Dataset, approx_knn, estimate_position, exact_knn

METRICS_HEADER = [
    "L",
    "T",
    "delta",
    "frac_compared",
    "memory_bits",
    "total_complexity",
    "avg_err_m",
    "baseline_err_m",
    "seed",
]

QUERY_STREAM = 1


@dataclass(frozen=True)
class SweepSpec:
    L_values: tuple[int, ...]
    T_values: tuple[int, ...]
    delta_values: tuple[int, ...]
    K: int = 2
    n_queries: int = 200
    seed: int = 0
    repeats: int = 1

    def __post_init__(self):
        if not (self.L_values and self.T_values and self.delta_values):
            raise InvalidConfig("sweep value lists must be nonempty")
        if self.repeats < 1 or self.n_queries < 1 or self.K < 1:
            raise InvalidConfig("repeats, n_queries and K must be positive")


@dataclass(frozen=True)
class MetricsRow:
    L: int
    T: int
    delta: int
    frac_compared: float
    memory_bits: int
    total_complexity: float
    avg_err_m: float
    baseline_err_m: float
    seed: int


def run_point(
    data: Dataset,
    queries: Dataset,
    L: int,
    T: int,
    delta: int,
    K: int,
    seed: int,
) -> MetricsRow:
    """One sweep point: build the index, answer every query, aggregate."""
    config = HashConfig(dim=data.dim, L=L, T=T, delta=delta, seed=seed)
    index = build_index(data.fingerprints, config)
    n = data.count
    compared_total = 0
    err_sum = 0.0
    base_sum = 0.0
    for q in range(queries.count):
        fp = queries.fingerprints[q]
        truth = queries.positions[q]
        neigh, compared = approx_knn(index, data, fp, K, delta)
        compared_total += compared
        err_sum += float(np.linalg.norm(estimate_position(data, neigh) - truth))
        base = exact_knn(data, fp, K)
        base_sum += float(np.linalg.norm(estimate_position(data, base) - truth))
    frac = compared_total / (n * queries.count)
    mem = memory_bits(index)
    return MetricsRow(
        L=L,
        T=T,
        delta=delta,
        frac_compared=frac,
        memory_bits=mem,
        total_complexity=frac * mem,
        avg_err_m=err_sum / queries.count,
        baseline_err_m=base_sum / queries.count,
        seed=seed,
    )


def scene_for_repeat(spec: SweepSpec, scene: SceneConfig, repeat: int) -> SceneConfig:
    return with_seed(scene, derived_seed(spec.seed, TAG_SCENE, repeat))


def _run_point_args(args) -> MetricsRow:
    return run_point(*args)


def run_sweep(
    spec: SweepSpec, scene: SceneConfig, jobs: int = 1
) -> list[MetricsRow]:
    """Cartesian sweep over (repeat, L, T, delta), deterministic row order.

    Per-repeat scene and hash seeds derive from the master seed; results
    are identical for any jobs count.
    """
    tasks = []
    for r in range(spec.repeats):
        cfg = scene_for_repeat(spec, scene, r)
        data = generate_scene(cfg)
        queries = generate_scene(cfg, count=spec.n_queries, stream=QUERY_STREAM)
        hash_seed = derived_seed(spec.seed, TAG_SCENE, r, 1)
        for L in spec.L_values:
            for T in spec.T_values:
                for delta in spec.delta_values:
                    tasks.append((data, queries, L, T, delta, spec.K, hash_seed))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_point_args, tasks))
    return [_run_point_args(t) for t in tasks]


def write_metrics_csv(rows: list[MetricsRow], path: str) -> None:
    """Delimited output; floats via repr so the round trip is exact."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(METRICS_HEADER)
        for row in rows:
            w.writerow(
                [
                    row.L,
                    row.T,
                    row.delta,
                    repr(row.frac_compared),
                    row.memory_bits,
                    repr(row.total_complexity),
                    repr(row.avg_err_m),
                    repr(row.baseline_err_m),
                    row.seed,
                ]
            )


def read_metrics_csv(path: str) -> list[MetricsRow]:
    rows = []
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if header != METRICS_HEADER:
            raise MalformedCsv(f"{path}: bad header {header}")
        for rec in r:
            if len(rec) != len(METRICS_HEADER):
                raise MalformedCsv(f"{path}: row has {len(rec)} fields")
            rows.append(
                MetricsRow(
                    L=int(rec[0]),
                    T=int(rec[1]),
                    delta=int(rec[2]),
                    frac_compared=float(rec[3]),
                    memory_bits=int(rec[4]),
                    total_complexity=float(rec[5]),
                    avg_err_m=float(rec[6]),
                    baseline_err_m=float(rec[7]),
                    seed=int(rec[8]),
                )
            )
    return rows
