"""LSH-accelerated CSI-fingerprint positioning: sum-to-one sign hashes,
multi-table approximate-Hamming lookup, K-NN location estimation, and a
benchmark CLI."""

from .bench import MetricsRow, SweepSpec, run_point, run_sweep
from .channel import SceneConfig, generate_scene
from .index import HashConfig, LshIndex, build_index, memory_bits, query_candidates
from .store import Dataset, NeighborSet, approx_knn, estimate_position, exact_knn
from .transform import StonePlan, apply, build_plan, make_sign_diagonal, sketch

__all__ = [
    "Dataset",
    "HashConfig",
    "LshIndex",
    "MetricsRow",
    "NeighborSet",
    "SceneConfig",
    "StonePlan",
    "SweepSpec",
    "apply",
    "approx_knn",
    "build_index",
    "build_plan",
    "estimate_position",
    "exact_knn",
    "generate_scene",
    "make_sign_diagonal",
    "memory_bits",
    "query_candidates",
    "run_point",
    "run_sweep",
    "sketch",
]
