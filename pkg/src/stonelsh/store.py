"""Fingerprint/location database, exact and approximate K-NN, position
estimation."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyDataset,
    EmptyNeighborSet,
    KTooLarge,
    MalformedCsv,
)
from .index import LshIndex, query_candidates


@dataclass(frozen=True)
class Dataset:
    """N fingerprints (non-negative, length D) with 2-D positions in meters."""

    fingerprints: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        if self.fingerprints.ndim != 2 or self.fingerprints.shape[0] == 0:
            raise EmptyDataset("need at least one fingerprint row")
        if self.positions.shape != (self.fingerprints.shape[0], 2):
            raise DimensionMismatch("positions must be N x 2")

    @property
    def count(self) -> int:
        return self.fingerprints.shape[0]

    @property
    def dim(self) -> int:
        return self.fingerprints.shape[1]


@dataclass(frozen=True)
class NeighborSet:
    """K database indices with their feature-space l2 distances, ascending."""

    indices: np.ndarray
    distances: np.ndarray


def _best_k(dists: np.ndarray, ids: np.ndarray, k: int) -> NeighborSet:
    # Stable sort on distance; ids are ascending, so ties break toward the
    # smaller database index everywhere.
    order = np.argsort(dists, kind="stable")[:k]
    return NeighborSet(indices=ids[order], distances=dists[order])


def exact_knn(data: Dataset, query: np.ndarray, k: int) -> NeighborSet:
    """Exhaustive K nearest neighbors in feature space (the reference)."""
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (data.dim,):
        raise DimensionMismatch(f"expected length {data.dim}, got {query.shape}")
    if k > data.count:
        raise KTooLarge(f"K={k} exceeds N={data.count}")
    dists = np.linalg.norm(data.fingerprints - query, axis=1)
    return _best_k(dists, np.arange(data.count), k)


def approx_knn(
    index: LshIndex,
    data: Dataset,
    query: np.ndarray,
    k: int,
    delta: int,
    fallback: str = "exhaustive",
) -> tuple[NeighborSet, int]:
    """Best K among the collision candidates; returns (neighbors, compared).

    `compared` counts true feature-distance evaluations.  With fewer than
    K candidates the "exhaustive" policy falls back to a full scan
    (compared = N); the "partial" policy returns what it has.
    """
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (data.dim,):
        raise DimensionMismatch(f"expected length {data.dim}, got {query.shape}")
    if k > data.count:
        raise KTooLarge(f"K={k} exceeds N={data.count}")
    cand = np.asarray(query_candidates(index, query, delta), dtype=np.int64)
    if len(cand) < k:
        if fallback == "exhaustive":
            return exact_knn(data, query, k), data.count
        dists = np.linalg.norm(data.fingerprints[cand] - query, axis=1)
        return _best_k(dists, cand, k), len(cand)
    dists = np.linalg.norm(data.fingerprints[cand] - query, axis=1)
    return _best_k(dists, cand, k), len(cand)


def estimate_position(data: Dataset, neighbors: NeighborSet) -> np.ndarray:
    """Unweighted mean of the neighbor positions."""
    if len(neighbors.indices) == 0:
        raise EmptyNeighborSet("no neighbors to average")
    return data.positions[neighbors.indices].mean(axis=0)


def write_dataset_csv(data: Dataset, path: str) -> None:
    """CSV with header x,y,f0,...,f{D-1}; floats written via repr for an
    exact round trip."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y"] + [f"f{i}" for i in range(data.dim)])
        for pos, fp in zip(data.positions, data.fingerprints):
            w.writerow([repr(float(v)) for v in pos] + [repr(float(v)) for v in fp])


def read_dataset_csv(path: str) -> Dataset:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if not header or header[:2] != ["x", "y"]:
            raise MalformedCsv(f"{path}: expected header x,y,f0,...")
        d = len(header) - 2
        if d < 1 or header[2:] != [f"f{i}" for i in range(d)]:
            raise MalformedCsv(f"{path}: malformed feature columns")
        positions, fps = [], []
        for row in r:
            if len(row) != d + 2:
                raise MalformedCsv(f"{path}: row has {len(row)} columns, expected {d + 2}")
            positions.append([float(row[0]), float(row[1])])
            fps.append([float(v) for v in row[2:]])
    if not fps:
        raise EmptyDataset(f"{path}: no data rows")
    return Dataset(
        fingerprints=np.array(fps, dtype=np.float64),
        positions=np.array(positions, dtype=np.float64),
    )
