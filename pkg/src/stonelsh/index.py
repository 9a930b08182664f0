"""Multi-table sign-sketch index with Hamming-ball candidate lookup.

Each of the T tables hashes a point by extracting L sketch bits at a
pseudo-random index subset.  Queries probe every bucket whose key lies
within Hamming distance delta of the query key and union the contents
across tables.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyDataset,
    IndexOutOfRange,
    InvalidConfig,
)
from .seeding import TAG_SUBSET, derived_rng
from .transform import (
    SignDiagonal,
    SignSketch,
    StonePlan,
    build_plan,
    make_sign_diagonal,
    sketch,
)

_MAGIC = b"SLSH"
_VERSION = 1


@dataclass(frozen=True)
class HashConfig:
    """Index parameters; seed fixes the sign diagonal and all subsets."""

    dim: int
    L: int
    T: int
    delta: int
    seed: int

    def __post_init__(self):
        if not (1 <= self.L <= self.dim):
            raise InvalidConfig(f"need 1 <= L <= dim, got L={self.L}, dim={self.dim}")
        if self.T < 1:
            raise InvalidConfig(f"need T >= 1, got {self.T}")
        if not (0 <= self.delta <= self.L):
            raise InvalidConfig(f"need 0 <= delta <= L, got delta={self.delta}")


@dataclass(frozen=True)
class LshIndex:
    config: HashConfig
    plan: StonePlan
    diag: SignDiagonal
    subsets: list[np.ndarray]
    tables: list[dict[int, list[int]]]
    n_points: int


def next_power_of_four(n: int) -> int:
    p = 4
    while p < n:
        p *= 4
    return p


def sample_subsets(dim: int, L: int, T: int, seed: int) -> list[np.ndarray]:
    """T subsets of {0..dim-1}, each of L distinct indices, ascending.

    Subset t depends only on (seed, t), so growing T appends tables
    without disturbing existing ones.
    """
    if L > dim:
        raise InvalidConfig(f"L={L} exceeds dim={dim}")
    return [
        np.sort(derived_rng(seed, TAG_SUBSET, t).choice(dim, size=L, replace=False))
        for t in range(T)
    ]


def hash_point(sk: SignSketch, subset: np.ndarray) -> int:
    """Pack the L sketch bits at the subset positions into an integer key.

    Bit t of the key is the sketch bit at the t-th smallest subset index.
    """
    if len(subset) and subset[-1] >= sk.dim:
        raise IndexOutOfRange(f"subset index {subset[-1]} >= sketch dim {sk.dim}")
    bits = sk.as_bool_array()[subset]
    return int.from_bytes(
        np.packbits(bits.astype(np.uint8), bitorder="little").tobytes(), "little"
    )


def enumerate_ball(key: int, L: int, delta: int) -> list[int]:
    """All keys within Hamming distance delta of key, key itself first."""
    if not (0 <= delta <= L):
        raise InvalidConfig(f"need 0 <= delta <= L, got delta={delta}, L={L}")
    out = [key]
    for r in range(1, delta + 1):
        for flips in combinations(range(L), r):
            mask = 0
            for b in flips:
                mask |= 1 << b
            out.append(key ^ mask)
    return out


def _sketch_dim(dim: int) -> int:
    return next_power_of_four(dim)


def _sketch_padded(plan: StonePlan, diag: SignDiagonal, f: np.ndarray) -> SignSketch:
    f = np.asarray(f, dtype=np.float64)
    if len(f) < plan.dim:
        f = np.concatenate([f, np.zeros(plan.dim - len(f))])
    return sketch(plan, diag, f)


def build_index(fingerprints: np.ndarray, config: HashConfig) -> LshIndex:
    """Hash every point once and insert it into all T tables.

    Inputs whose dimension is not a power of 4 are zero-padded to the
    next power of 4 before sketching; subsets are drawn over the padded
    dimension.
    """
    fps = np.asarray(fingerprints, dtype=np.float64)
    if fps.ndim != 2 or fps.shape[0] == 0:
        raise EmptyDataset("need a nonempty 2-D fingerprint array")
    n, d = fps.shape
    if d != config.dim:
        raise DimensionMismatch(f"config dim {config.dim}, data dim {d}")
    sd = _sketch_dim(config.dim)
    plan = build_plan(sd)
    diag = make_sign_diagonal(sd, config.seed)
    subsets = sample_subsets(sd, config.L, config.T, config.seed)
    tables: list[dict[int, list[int]]] = [{} for _ in range(config.T)]
    for i in range(n):
        sk = _sketch_padded(plan, diag, fps[i])
        for t, omega in enumerate(subsets):
            key = hash_point(sk, omega)
            tables[t].setdefault(key, []).append(i)
    return LshIndex(
        config=config, plan=plan, diag=diag, subsets=subsets, tables=tables, n_points=n
    )


def query_candidates(index: LshIndex, f: np.ndarray, delta: int) -> list[int]:
    """Deduplicated union of all buckets probed across tables, ascending."""
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (index.config.dim,):
        raise DimensionMismatch(f"expected length {index.config.dim}, got {f.shape}")
    sk = _sketch_padded(index.plan, index.diag, f)
    found: set[int] = set()
    for omega, table in zip(index.subsets, index.tables):
        key = hash_point(sk, omega)
        for probe in enumerate_ball(key, index.config.L, delta):
            bucket = table.get(probe)
            if bucket:
                found.update(bucket)
    return sorted(found)


def memory_bits(index: LshIndex) -> int:
    """Table storage: per entry, L key bits plus one database index."""
    n = index.n_points
    idx_bits = (n - 1).bit_length()  # ceil(log2 n), with log2(1) -> 0
    return index.config.T * n * (index.config.L + idx_bits)


def save_index(index: LshIndex, path: str) -> None:
    """Binary serialization, little-endian.

    Layout: magic "SLSH", version u16, dim u32, L u16, T u16,
    delta u16, N u32, seed u64; then T subsets of L u32 indices; then
    sketch_dim u32 and that many i8 diagonal signs; then per table a
    bucket count u32 followed by (key: ceil(L/8) bytes, length u32,
    indices u32...) records with keys ascending.
    """
    cfg = index.config
    key_bytes = (cfg.L + 7) // 8
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(
            struct.pack(
                "<HIHHHIQ", _VERSION, cfg.dim, cfg.L, cfg.T, cfg.delta, index.n_points, cfg.seed
            )
        )
        for omega in index.subsets:
            fh.write(omega.astype("<u4").tobytes())
        fh.write(struct.pack("<I", index.diag.dim))
        fh.write(index.diag.signs.astype("<i1").tobytes())
        for table in index.tables:
            fh.write(struct.pack("<I", len(table)))
            for key in sorted(table):
                bucket = table[key]
                fh.write(key.to_bytes(key_bytes, "little"))
                fh.write(struct.pack("<I", len(bucket)))
                fh.write(np.asarray(bucket, dtype="<u4").tobytes())


def load_index(path: str) -> LshIndex:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != _MAGIC:
        raise InvalidConfig("not an index file (bad magic)")
    off = 4
    version, dim, L, T, delta, n, seed = struct.unpack_from("<HIHHHIQ", raw, off)
    if version != _VERSION:
        raise InvalidConfig(f"unsupported index version {version}")
    off += struct.calcsize("<HIHHHIQ")
    subsets = []
    for _ in range(T):
        omega = np.frombuffer(raw, dtype="<u4", count=L, offset=off).astype(np.int64)
        subsets.append(omega)
        off += 4 * L
    (sd,) = struct.unpack_from("<I", raw, off)
    off += 4
    signs = np.frombuffer(raw, dtype="<i1", count=sd, offset=off).astype(np.int8)
    signs.setflags(write=False)
    off += sd
    key_bytes = (L + 7) // 8
    tables: list[dict[int, list[int]]] = []
    for _ in range(T):
        (n_buckets,) = struct.unpack_from("<I", raw, off)
        off += 4
        table: dict[int, list[int]] = {}
        for _ in range(n_buckets):
            key = int.from_bytes(raw[off : off + key_bytes], "little")
            off += key_bytes
            (blen,) = struct.unpack_from("<I", raw, off)
            off += 4
            idx = np.frombuffer(raw, dtype="<u4", count=blen, offset=off)
            off += 4 * blen
            table[key] = [int(i) for i in idx]
        tables.append(table)
    config = HashConfig(dim=dim, L=L, T=T, delta=delta, seed=seed)
    diag = SignDiagonal(dim=sd, signs=signs, seed=seed)
    return LshIndex(
        config=config,
        plan=build_plan(sd),
        diag=diag,
        subsets=subsets,
        tables=tables,
        n_points=n,
    )
