"""Z2 boundary matrices, column reduction, pairings and Betti numbers.

The reduction is the standard left-to-right algorithm: each column is added
to by earlier columns sharing its largest row index until it is empty or its
low is unique.  No clearing or twist shortcuts are applied.  Disjoint
independent column spans can be reduced separately and merged, which is what
the parallel drivers build on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._reduce import reduce_span
from .complexes import Filtration, StructuralError

__all__ = [
    "BoundaryMatrix",
    "build_boundary_matrix",
    "ReductionState",
    "PersistencePairing",
    "pair_cells",
    "merge_states",
    "BettiNumbers",
    "betti",
    "rank_oracle",
    "RANK_ORACLE_LIMIT",
]


@dataclass
class BoundaryMatrix:
    """Sparse Z2 matrix: per column the ascending row indices of its support.

    Rows and columns share one index space (the filtration positions); a
    valid matrix has every entry strictly below its column index.
    """

    entries: np.ndarray
    offsets: np.ndarray
    dims: np.ndarray

    @property
    def m(self) -> int:
        return len(self.offsets) - 1

    def column(self, j: int) -> np.ndarray:
        return self.entries[self.offsets[j]: self.offsets[j + 1]]

    @classmethod
    def from_columns(
        cls, columns: Sequence[Iterable[int]], dims: Sequence[int]
    ) -> "BoundaryMatrix":
        cols = [np.asarray(sorted(c), dtype=np.int64) for c in columns]
        offsets = np.zeros(len(cols) + 1, dtype=np.int64)
        np.cumsum([len(c) for c in cols], out=offsets[1:])
        entries = (
            np.concatenate(cols) if cols else np.empty(0, dtype=np.int64)
        )
        return cls(entries, offsets, np.asarray(dims, dtype=np.int64))

    def validate(self) -> None:
        if len(self.dims) != self.m:
            raise StructuralError("dims length must match column count")
        for j in range(self.m):
            col = self.column(j)
            if len(col) == 0:
                continue
            if (np.diff(col) <= 0).any():
                raise StructuralError(f"column {j} rows not strictly ascending")
            if col[-1] >= j or col[0] < 0:
                raise StructuralError(f"column {j} references row >= {j}")


def build_boundary_matrix(f: Filtration) -> BoundaryMatrix:
    """Boundary matrix of a filtration, columns in filtration order."""
    K = f.complex
    m = len(K)
    rank = f.rank
    dims_by_id = K.cell_dims()
    col_dims = dims_by_id[f.order]
    lengths = np.where(col_dims > 0, col_dims + 1, 0)
    offsets = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    entries = np.empty(int(offsets[-1]), dtype=np.int64)
    for d in range(1, K.dimension + 1):
        n_d = len(K.by_dim[d])
        if n_d == 0:
            continue
        ids = K.dim_offsets[d] + np.arange(n_d, dtype=np.int64)
        pos = rank[ids]
        rows = np.sort(rank[K.face_ids(d)], axis=1)
        starts = offsets[pos]
        idx = starts[:, None] + np.arange(d + 1, dtype=np.int64)[None, :]
        entries[idx.ravel()] = rows.ravel()
    return BoundaryMatrix(entries, offsets, col_dims)


@dataclass
class ReductionState:
    """Mutable record of reduced columns over one contiguous id universe.

    Arrays are indexed by id - row_base.  col_len is -1 for columns not yet
    processed, 0 for columns reduced to zero, else the stored length; col_low
    holds the pivot row (-1 when empty); low_to_col inverts col_low.
    """

    row_base: int
    length: int
    low_to_col: np.ndarray
    col_start: np.ndarray
    col_len: np.ndarray
    col_low: np.ndarray
    pool: np.ndarray
    pool_used: int = 0
    additions: int = 0

    @classmethod
    def fresh(cls, row_base: int, length: int, pool_hint: int = 0) -> "ReductionState":
        return cls(
            row_base=row_base,
            length=length,
            low_to_col=np.full(length, -1, dtype=np.int64),
            col_start=np.zeros(length, dtype=np.int64),
            col_len=np.full(length, -1, dtype=np.int64),
            col_low=np.full(length, -1, dtype=np.int64),
            pool=np.empty(max(64, pool_hint), dtype=np.int64),
        )

    def reduced_column(self, j: int) -> np.ndarray:
        """Entries of reduced column j (ascending); raises if unprocessed."""
        i = j - self.row_base
        if self.col_len[i] < 0:
            raise KeyError(f"column {j} not reduced yet")
        s = self.col_start[i]
        return self.pool[s: s + self.col_len[i]]

    def lows(self) -> np.ndarray:
        """Per-column pivot rows over the universe (-1 for empty/unprocessed)."""
        return self.col_low.copy()

    def pairing(self, span: tuple[int, int]) -> "PersistencePairing":
        s, e = span
        i0, i1 = s - self.row_base, e - self.row_base
        lows = self.col_low[i0:i1]
        lens = self.col_len[i0:i1]
        ids = np.arange(s, e, dtype=np.int64)
        destroyers = ids[lows >= 0]
        creators = lows[lows >= 0]
        undecided = (lens == 0) & (self.low_to_col[i0:i1] < 0)
        return PersistencePairing(
            creators=creators.copy(),
            destroyers=destroyers.copy(),
            unpaired=ids[undecided],
            span=(s, e),
        )


@dataclass(frozen=True)
class PersistencePairing:
    """Creator/destroyer pairs plus unpaired creators over a column span."""

    creators: np.ndarray
    destroyers: np.ndarray
    unpaired: np.ndarray
    span: tuple[int, int]

    def pairs_set(self) -> set[tuple[int, int]]:
        return {(int(c), int(d)) for c, d in zip(self.creators, self.destroyers)}

    def unpaired_set(self) -> set[int]:
        return {int(u) for u in self.unpaired}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PersistencePairing):
            return NotImplemented
        return (
            self.span == other.span
            and np.array_equal(self.creators, other.creators)
            and np.array_equal(self.destroyers, other.destroyers)
            and np.array_equal(self.unpaired, other.unpaired)
        )


def pair_cells(
    matrix: BoundaryMatrix,
    span: tuple[int, int] | None = None,
    mode: str = "absolute",
    state: ReductionState | None = None,
) -> PersistencePairing:
    """Reduce the columns of `span` and return the partial pairing over it.

    In absolute mode every face index must lie in the span or in columns the
    state has already reduced; in relative mode entries below the span are
    dropped first (homology relative to the preceding prefix).  Passing the
    same state across successive calls continues one left-to-right reduction.
    """
    if mode not in ("absolute", "relative"):
        raise ValueError(f"unknown mode {mode!r}")
    m = matrix.m
    s, e = span if span is not None else (0, m)
    if not 0 <= s <= e <= m:
        raise ValueError(f"bad span {(s, e)} for {m} columns")
    if state is None:
        state = ReductionState.fresh(
            s, e - s, pool_hint=int(matrix.offsets[e] - matrix.offsets[s])
        )
    if not (state.row_base <= s and e <= state.row_base + state.length):
        raise ValueError("state universe does not cover the span")
    i0 = s - state.row_base
    if mode == "absolute" and i0 > 0 and int(state.col_len[:i0].min()) < 0:
        # a skipped column could claim lows this span would then steal
        raise ValueError("absolute mode: unprocessed columns precede the span")
    seg = matrix.entries[matrix.offsets[s]: matrix.offsets[e]]
    if mode == "absolute" and len(seg) and int(seg.min()) < state.row_base:
        raise StructuralError(
            "absolute mode: span references rows below the state universe"
        )
    pool, used, adds = reduce_span(
        matrix.entries,
        matrix.offsets,
        s,
        e,
        mode == "relative",
        state.row_base,
        state.low_to_col,
        state.col_start,
        state.col_len,
        state.col_low,
        state.pool,
        state.pool_used,
    )
    state.pool = pool
    state.pool_used = int(used)
    state.additions += int(adds)
    return state.pairing((s, e))


def merge_states(
    m: int, parts: Sequence[tuple[tuple[int, int], ReductionState]]
) -> ReductionState:
    """Combine block-local states into one state over [0, m).

    Blocks must be disjoint ascending spans, each fully reduced by its own
    state; pool contents are concatenated in block order so the merge is
    independent of which worker finished first.
    """
    parts = sorted(parts, key=lambda p: p[0][0])
    prev_end = 0
    for (s, e), st in parts:
        if s < prev_end:
            raise ValueError("blocks overlap")
        if not (st.row_base == s and st.length == e - s):
            raise ValueError("state universe must equal its block span")
        prev_end = e
    total = sum(st.pool_used for _, st in parts)
    out = ReductionState.fresh(0, m, pool_hint=total)
    off = 0
    for (s, e), st in parts:
        out.low_to_col[s:e] = st.low_to_col
        out.col_start[s:e] = st.col_start + off
        out.col_len[s:e] = st.col_len
        out.col_low[s:e] = st.col_low
        out.pool[off: off + st.pool_used] = st.pool[: st.pool_used]
        off += st.pool_used
        out.additions += st.additions
    out.pool_used = off
    return out


@dataclass(frozen=True)
class BettiNumbers:
    """Betti numbers beta_d indexed by dimension; trailing zeros trimmed."""

    counts: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        c = tuple(int(x) for x in self.counts)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "counts", c)

    def __getitem__(self, d: int) -> int:
        return self.counts[d] if 0 <= d < len(self.counts) else 0

    def as_dict(self) -> dict[int, int]:
        return {d: v for d, v in enumerate(self.counts) if v}

    def __str__(self) -> str:
        if not self.counts:
            return "all zero"
        return " ".join(f"β{d}={v}" for d, v in enumerate(self.counts) if v)


def betti(pairing: PersistencePairing, dims: np.ndarray) -> BettiNumbers:
    """Betti numbers from a complete pairing: unpaired d-cells count beta_d."""
    if len(pairing.unpaired) == 0:
        return BettiNumbers(())
    ds = np.asarray(dims)[pairing.unpaired]
    return BettiNumbers(tuple(np.bincount(ds).tolist()))


RANK_ORACLE_LIMIT = 20000


def _gf2_rank(columns: list[int]) -> int:
    pivots: dict[int, int] = {}
    r = 0
    for x in columns:
        while x:
            p = x & -x
            other = pivots.get(p)
            if other is None:
                pivots[p] = x
                r += 1
                break
            x ^= other
    return r


def rank_oracle(matrix: BoundaryMatrix) -> BettiNumbers:
    """Betti numbers via dense GF(2) ranks: beta_n = C_n - rk d_n - rk d_(n+1).

    Brute-force cross-check, independent of the reduction path; refuses
    matrices above RANK_ORACLE_LIMIT columns.
    """
    m = matrix.m
    if m > RANK_ORACLE_LIMIT:
        raise ValueError(f"rank oracle limited to {RANK_ORACLE_LIMIT} columns")
    if m == 0:
        return BettiNumbers(())
    dims = np.asarray(matrix.dims)
    top = int(dims.max())
    cols_by_dim: dict[int, list[int]] = {d: [] for d in range(top + 1)}
    for j in range(m):
        bits = 0
        for r in matrix.column(j):
            bits |= 1 << int(r)
        cols_by_dim[int(dims[j])].append(bits)
    ranks = {d: _gf2_rank(cols_by_dim[d]) for d in range(1, top + 1)}
    ranks[0] = 0
    ranks[top + 1] = 0
    counts = np.bincount(dims, minlength=top + 1)
    beta = [int(counts[d]) - ranks[d] - ranks[d + 1] for d in range(top + 1)]
    return BettiNumbers(tuple(beta))
