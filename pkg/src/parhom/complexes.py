"""Simplicial complexes over dense integer vertex ids.

A simplex is a strictly increasing tuple of vertex ids; a complex stores its
cells per dimension as lex-sorted numpy arrays, so dimension-major
(lexicographic) order doubles as the canonical cell indexing.  All homology
here is over Z2, so no orientation data is kept.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

from ._rows import lexsort_rows, rows_in, searchsorted_rows, unique_rows

__all__ = [
    "Simplex",
    "FormatError",
    "StructuralError",
    "as_simplex",
    "boundary",
    "SimplicialComplex",
    "closure",
    "skeleton",
    "maximal_cells",
    "Filtration",
    "lexicographic_filtration",
    "validate_filtration",
    "load_complex",
    "save_complex",
]

# canonical form: strictly increasing vertex ids
Simplex = tuple[int, ...]


class FormatError(ValueError):
    """Malformed on-disk data (.cplx, .pts, partition files)."""


class StructuralError(ValueError):
    """Input violates a structural precondition (closure, filtration order)."""


def as_simplex(vertices: Iterable[int]) -> Simplex:
    """Canonicalize a vertex collection into a simplex tuple."""
    vs = tuple(sorted(int(v) for v in vertices))
    if len(vs) == 0:
        raise ValueError("a simplex needs at least one vertex")
    if any(v < 0 for v in vs):
        raise ValueError("vertex ids must be non-negative")
    if any(a == b for a, b in zip(vs, vs[1:])):
        raise ValueError(f"repeated vertex in {vs}")
    return vs


def boundary(simplex: Iterable[int]) -> set[Simplex]:
    """Codimension-1 faces of a simplex; empty for a vertex."""
    s = as_simplex(simplex)
    if len(s) == 1:
        return set()
    return {s[:i] + s[i + 1:] for i in range(len(s))}


def _group_by_dim(cells: Iterable[Iterable[int]]) -> dict[int, np.ndarray]:
    grouped: dict[int, list[Simplex]] = {}
    for c in cells:
        s = as_simplex(c)
        grouped.setdefault(len(s) - 1, []).append(s)
    return {
        d: unique_rows(np.asarray(rows, dtype=np.int64))
        for d, rows in grouped.items()
    }


class SimplicialComplex:
    """Finite simplicial complex; cells stored per dimension, lex-sorted.

    The global id of a cell is its position in the dimension-major
    lexicographic order, i.e. `dim_offsets[d] + rank within dimension d`.
    """

    __slots__ = ("by_dim", "n_vertices", "dim_offsets", "_face_ids")

    def __init__(self, by_dim: Sequence[np.ndarray], n_vertices: int):
        by_dim = list(by_dim)
        while by_dim and len(by_dim[-1]) == 0:
            by_dim.pop()
        self.by_dim: tuple[np.ndarray, ...] = tuple(
            np.ascontiguousarray(a, dtype=np.int64) for a in by_dim
        )
        self.n_vertices = int(n_vertices)
        offs = np.zeros(len(self.by_dim) + 1, dtype=np.int64)
        for d, a in enumerate(self.by_dim):
            if a.ndim != 2 or a.shape[1] != d + 1:
                raise ValueError(f"dimension {d} block has shape {a.shape}")
            offs[d + 1] = offs[d] + len(a)
        self.dim_offsets = offs
        self._face_ids: dict[int, np.ndarray] = {}

    # -- construction ------------------------------------------------------

    @classmethod
    def from_cells(
        cls,
        cells: Iterable[Iterable[int]],
        n_vertices: int | None = None,
        require_closed: bool = True,
    ) -> "SimplicialComplex":
        grouped = _group_by_dim(cells)
        top = max(grouped) if grouped else -1
        by_dim = [
            grouped.get(d, np.empty((0, d + 1), dtype=np.int64))
            for d in range(top + 1)
        ]
        if n_vertices is None:
            tops = [a[:, -1].max() for a in by_dim if len(a)]
            n_vertices = int(max(tops)) + 1 if tops else 0
        K = cls(by_dim, n_vertices)
        if require_closed and not K._is_closed():
            raise StructuralError("cell set is not closed under faces")
        return K

    def _is_closed(self) -> bool:
        for d in range(1, self.dimension + 1):
            cells = self.by_dim[d]
            below = self.by_dim[d - 1]
            for drop in range(d + 1):
                faces = np.delete(cells, drop, axis=1)
                if not rows_in(below, faces).all():
                    return False
        return True

    # -- basic queries -----------------------------------------------------

    @property
    def dimension(self) -> int:
        return len(self.by_dim) - 1

    def __len__(self) -> int:
        return int(self.dim_offsets[-1])

    def cells(self) -> Iterator[Simplex]:
        """All cells in dimension-major lexicographic order."""
        for a in self.by_dim:
            for row in a:
                yield tuple(int(v) for v in row)

    def cell(self, i: int) -> Simplex:
        d = int(np.searchsorted(self.dim_offsets, i, side="right")) - 1
        if not 0 <= i < len(self):
            raise IndexError(i)
        row = self.by_dim[d][i - self.dim_offsets[d]]
        return tuple(int(v) for v in row)

    def __contains__(self, simplex: Iterable[int]) -> bool:
        try:
            s = as_simplex(simplex)
        except ValueError:
            return False
        d = len(s) - 1
        if d > self.dimension:
            return False
        a = self.by_dim[d]
        q = np.asarray([s], dtype=np.int64)
        return bool(rows_in(a, q)[0])

    def index_of(self, simplex: Iterable[int]) -> int:
        """Global id of a cell; KeyError if absent."""
        s = as_simplex(simplex)
        d = len(s) - 1
        if d > self.dimension:
            raise KeyError(s)
        a = self.by_dim[d]
        q = np.asarray([s], dtype=np.int64)
        pos = int(searchsorted_rows(a, q)[0])
        if pos >= len(a) or not np.array_equal(a[pos], q[0]):
            raise KeyError(s)
        return int(self.dim_offsets[d]) + pos

    def cell_dims(self) -> np.ndarray:
        """Per-cell dimension, indexed by global id."""
        return np.repeat(
            np.arange(self.dimension + 1, dtype=np.int64),
            np.diff(self.dim_offsets),
        )

    def face_ids(self, d: int) -> np.ndarray:
        """Global ids of the codim-1 faces of every d-cell, shape (n_d, d+1)."""
        if d < 1 or d > self.dimension:
            raise ValueError(f"no faces table for dimension {d}")
        cached = self._face_ids.get(d)
        if cached is not None:
            return cached
        cells = self.by_dim[d]
        below = self.by_dim[d - 1]
        out = np.empty((len(cells), d + 1), dtype=np.int64)
        for drop in range(d + 1):
            faces = np.delete(cells, drop, axis=1)
            pos = searchsorted_rows(below, faces)
            bad = (pos >= len(below)) | ~np.all(
                below[np.minimum(pos, len(below) - 1)] == faces, axis=1
            )
            if bad.any():
                missing = tuple(int(v) for v in faces[np.flatnonzero(bad)[0]])
                raise StructuralError(f"face {missing} missing from complex")
            out[:, drop] = self.dim_offsets[d - 1] + pos
        self._face_ids[d] = out
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return (
            self.n_vertices == other.n_vertices
            and len(self.by_dim) == len(other.by_dim)
            and all(np.array_equal(a, b) for a, b in zip(self.by_dim, other.by_dim))
        )

    def __hash__(self):
        return hash((self.n_vertices, len(self), self.dimension))

    def __repr__(self) -> str:
        return (
            f"SimplicialComplex(cells={len(self)}, dim={self.dimension}, "
            f"vertices={self.n_vertices})"
        )


def closure(cells: Iterable[Iterable[int]], n_vertices: int | None = None) -> SimplicialComplex:
    """Smallest simplicial complex containing the given cells."""
    grouped = _group_by_dim(cells)
    if not grouped:
        return SimplicialComplex([], n_vertices or 0)
    top = max(grouped)
    by_dim: list[np.ndarray] = [
        grouped.get(d, np.empty((0, d + 1), dtype=np.int64))
        for d in range(top + 1)
    ]
    for d in range(top, 0, -1):
        cells_d = by_dim[d]
        if len(cells_d) == 0:
            continue
        faces = np.concatenate(
            [np.delete(cells_d, drop, axis=1) for drop in range(d + 1)]
        )
        by_dim[d - 1] = unique_rows(np.concatenate([by_dim[d - 1], faces]))
    if n_vertices is None:
        n_vertices = int(by_dim[0][:, 0].max()) + 1 if len(by_dim[0]) else 0
    return SimplicialComplex(by_dim, n_vertices)


def skeleton(K: SimplicialComplex, k: int) -> SimplicialComplex:
    """The k-skeleton: all cells of dimension <= k."""
    if k < 0:
        return SimplicialComplex([], K.n_vertices)
    return SimplicialComplex(K.by_dim[: k + 1], K.n_vertices)


def maximal_cells(K: SimplicialComplex) -> set[Simplex]:
    """Cells that are not a proper face of any other cell."""
    out: set[Simplex] = set()
    for d in range(K.dimension + 1):
        cells = K.by_dim[d]
        if len(cells) == 0:
            continue
        is_face = np.zeros(len(cells), dtype=bool)
        if d + 1 <= K.dimension and len(K.by_dim[d + 1]):
            fid = K.face_ids(d + 1) - K.dim_offsets[d]
            is_face[np.unique(fid.ravel())] = True
        for row in cells[~is_face]:
            out.add(tuple(int(v) for v in row))
    return out


class Filtration:
    """A total order on the cells of a complex with faces before cofaces.

    `order[t]` is the global cell id at position t; `rank` is its inverse.
    """

    __slots__ = ("complex", "order", "rank")

    def __init__(self, K: SimplicialComplex, order: np.ndarray):
        order = np.ascontiguousarray(order, dtype=np.int64)
        if len(order) != len(K):
            raise StructuralError("filtration must cover every cell exactly once")
        rank = np.full(len(K), -1, dtype=np.int64)
        rank[order] = np.arange(len(K), dtype=np.int64)
        if (rank < 0).any():
            raise StructuralError("filtration must cover every cell exactly once")
        self.complex = K
        self.order = order
        self.rank = rank

    @classmethod
    def from_cells(
        cls, K: SimplicialComplex, cells: Iterable[Iterable[int]]
    ) -> "Filtration":
        ids = np.asarray([K.index_of(c) for c in cells], dtype=np.int64)
        f = cls(K, ids)
        if not validate_filtration(f):
            raise StructuralError("sequence is not a valid filtration")
        return f

    def __len__(self) -> int:
        return len(self.order)

    def cells(self) -> Iterator[Simplex]:
        for i in self.order:
            yield self.complex.cell(int(i))

    def cell_at(self, t: int) -> Simplex:
        return self.complex.cell(int(self.order[t]))

    def index(self, simplex: Iterable[int]) -> int:
        return int(self.rank[self.complex.index_of(simplex)])

    def cell_dims(self) -> np.ndarray:
        """Per-position cell dimension."""
        return self.complex.cell_dims()[self.order]

    def is_lexicographic(self) -> bool:
        return bool(np.array_equal(self.order, np.arange(len(self.order))))


def lexicographic_filtration(K: SimplicialComplex) -> Filtration:
    """Dimension-major, then lexicographic order on the cells of K."""
    return Filtration(K, np.arange(len(K), dtype=np.int64))


def validate_filtration(f: "Filtration | Iterable[Iterable[int]]") -> bool:
    """True iff every cell's faces appear strictly earlier and nothing repeats."""
    if isinstance(f, Filtration):
        K = f.complex
        rank = f.rank
        for d in range(1, K.dimension + 1):
            ids = K.dim_offsets[d] + np.arange(len(K.by_dim[d]))
            if (rank[K.face_ids(d)] >= rank[ids][:, None]).any():
                return False
        return True
    seen: dict[Simplex, int] = {}
    try:
        seq = [as_simplex(c) for c in f]
    except ValueError:
        return False
    for t, s in enumerate(seq):
        if s in seen:
            return False
        for face in boundary(s):
            if face not in seen:
                return False
        seen[s] = t
    return True


# -- .cplx files -----------------------------------------------------------


def _parse_cplx_line(line: str, lineno: int) -> list[int] | None:
    body = line.split("#", 1)[0].rstrip("\n").rstrip("\r")
    if body.strip() == "":
        return None
    tokens = body.strip().split(" ")
    verts: list[int] = []
    for tok in tokens:
        if tok == "":
            raise FormatError(f"line {lineno}: malformed spacing")
        try:
            v = int(tok, 10)
        except ValueError:
            raise FormatError(f"line {lineno}: {tok!r} is not an integer") from None
        if v < 0:
            raise FormatError(f"line {lineno}: negative vertex id {v}")
        verts.append(v)
    for a, b in zip(verts, verts[1:]):
        if a >= b:
            raise FormatError(f"line {lineno}: vertex ids must strictly increase")
    return verts


def load_complex(path: str) -> SimplicialComplex:
    """Read a .cplx file and return the closure of the listed cells.

    Vertex ids are re-indexed to a dense range [0, n) preserving their
    numeric order.
    """
    grouped: dict[int, list[list[int]]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            verts = _parse_cplx_line(line, lineno)
            if verts is None:
                continue
            grouped.setdefault(len(verts) - 1, []).append(verts)
    if not grouped:
        return SimplicialComplex([], 0)
    arrays = {
        d: np.asarray(rows, dtype=np.int64) for d, rows in grouped.items()
    }
    distinct = np.unique(np.concatenate([a.ravel() for a in arrays.values()]))
    dense = [np.searchsorted(distinct, a) for a in arrays.values()]
    return closure_of_arrays(dense, len(distinct))


def closure_of_arrays(cell_arrays: Sequence[np.ndarray], n_vertices: int) -> SimplicialComplex:
    """Closure of cells given as per-width integer arrays (internal fast path)."""
    grouped: dict[int, np.ndarray] = {}
    for a in cell_arrays:
        d = a.shape[1] - 1
        prev = grouped.get(d)
        grouped[d] = a if prev is None else np.concatenate([prev, a])
    top = max(grouped)
    by_dim: list[np.ndarray] = [
        unique_rows(grouped[d]) if d in grouped else np.empty((0, d + 1), np.int64)
        for d in range(top + 1)
    ]
    for d in range(top, 0, -1):
        cells_d = by_dim[d]
        if len(cells_d) == 0:
            continue
        faces = np.concatenate(
            [np.delete(cells_d, drop, axis=1) for drop in range(d + 1)]
        )
        by_dim[d - 1] = unique_rows(np.concatenate([by_dim[d - 1], faces]))
    return SimplicialComplex(by_dim, n_vertices)


def save_complex(K: SimplicialComplex, path: str) -> None:
    """Write every cell, one per line, in lexicographic-filtration order."""
    with open(path, "w", encoding="utf-8") as fh:
        for a in K.by_dim:
            if len(a) == 0:
                continue
            lines = "\n".join(" ".join(map(str, row)) for row in a.tolist())
            fh.write(lines)
            fh.write("\n")
