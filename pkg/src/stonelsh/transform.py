"""Sum-to-one (STOne) fast transform and sign sketches.

The transform matrix is the m-fold Kronecker power of a 4x4 stencil.  It
is symmetric, orthonormal, and every row sums to one.  The fast path
applies the stencil in m strided stages, costing Theta(D log D) instead
of the dense D^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionTooLargeForOracle,
    NotPowerOfFour,
)
from .seeding import TAG_DIAG, derived_rng

# 4x4 stencil: 1/2 * (ones - 2*I). Rows sum to 1, S @ S.T = I.
STENCIL = 0.5 * (np.ones((4, 4)) - 2.0 * np.eye(4))

_ORACLE_MAX_DIM = 1024


@dataclass
class OpCounter:
    """Counts arithmetic operations of the fast apply, for scaling tests."""

    ops: int = 0


@dataclass(frozen=True)
class StonePlan:
    """Factored representation of the D x D transform, D = 4**levels."""

    dim: int
    levels: int


@dataclass(frozen=True)
class SignDiagonal:
    """Pseudo-random antipodal diagonal, fully determined by (dim, seed)."""

    dim: int
    signs: np.ndarray
    seed: int


@dataclass(frozen=True)
class SignSketch:
    """Packed sign pattern of the transformed input, +1 -> 1, -1 -> 0.

    Bit i lives in byte i // 8 at position i % 8 (little-endian bit
    order), so `packed` is the canonical serialized form.
    """

    dim: int
    packed: bytes
    _bools: np.ndarray = field(repr=False, compare=False)

    def as_bool_array(self) -> np.ndarray:
        """Unpacked view: True where the sketch bit is +1."""
        return self._bools


def _levels_of(dim: int) -> int:
    if dim >= 4:
        m = round(np.log(dim) / np.log(4))
        if 4**m == dim:
            return m
    raise NotPowerOfFour(f"dim must be a power of 4 and >= 4, got {dim}")


def build_plan(dim: int) -> StonePlan:
    """Plan for the transform of size dim; dim must be 4**m, m >= 1."""
    return StonePlan(dim=dim, levels=_levels_of(dim))


def apply(plan: StonePlan, v: np.ndarray, counter: OpCounter | None = None) -> np.ndarray:
    """H @ v via m stencil stages on a working buffer, never densified.

    Each stage applies the stencil across strided groups of 4: within a
    group, y_i = s/2 - x_i where s is the group sum.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (plan.dim,):
        raise DimensionMismatch(f"expected length {plan.dim}, got shape {v.shape}")
    w = v.copy()
    for level in range(plan.levels):
        grp = w.reshape(4**level, 4, -1)
        s = grp.sum(axis=1, keepdims=True)
        w = (0.5 * s - grp).reshape(-1)
        if counter is not None:
            # 3 adds per group of 4 for s, then a multiply and a subtract
            # per output element.
            counter.ops += 3 * (plan.dim // 4) + 2 * plan.dim
    return w


def dense_matrix(plan: StonePlan) -> np.ndarray:
    """Explicit Kronecker-power matrix; O(D^2) memory, oracle use only."""
    if plan.dim > _ORACLE_MAX_DIM:
        raise DimensionTooLargeForOracle(f"dense oracle capped at {_ORACLE_MAX_DIM}")
    h = STENCIL
    for _ in range(plan.levels - 1):
        h = np.kron(h, STENCIL)
    return h


def dense_apply_oracle(plan: StonePlan, v: np.ndarray) -> np.ndarray:
    """Reference H @ v through the materialized matrix (tests only)."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (plan.dim,):
        raise DimensionMismatch(f"expected length {plan.dim}, got shape {v.shape}")
    return dense_matrix(plan) @ v


def make_sign_diagonal(dim: int, seed: int) -> SignDiagonal:
    """Deterministic +-1 diagonal from the seeded generator."""
    rng = derived_rng(seed, TAG_DIAG)
    signs = rng.integers(0, 2, size=dim).astype(np.int8) * 2 - 1
    signs.setflags(write=False)
    return SignDiagonal(dim=dim, signs=signs, seed=seed)


def pack_bits(bools: np.ndarray) -> bytes:
    return np.packbits(bools.astype(np.uint8), bitorder="little").tobytes()


def sketch(plan: StonePlan, diag: SignDiagonal, f: np.ndarray) -> SignSketch:
    """sign(H D f) with sign(0) := +1, packed to bits.

    Scale-invariant: any positive rescaling of f yields the same sketch.
    """
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (plan.dim,) or diag.dim != plan.dim:
        raise DimensionMismatch(
            f"plan dim {plan.dim}, diag dim {diag.dim}, input shape {f.shape}"
        )
    t = apply(plan, diag.signs * f)
    bools = t >= 0.0
    bools.setflags(write=False)
    return SignSketch(dim=plan.dim, packed=pack_bits(bools), _bools=bools)
