"""Covers of a complex induced by graph partitions, and their statistics.

A cover assigns each cell a small set of labels (cover-set indices), stored
as per-cell bitmasks.  Partition-based covers use classes 0..p-1 for cells
whose vertices sit in one part and a shared class p for straddling cells;
closing the shared class downward makes every class face-closed while adding
at most one extra label to any cell.
"""
from __future__ import annotations

from dataclasses import dataclass
from collections import deque
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._rows import unique_rows
from .complexes import (
    FormatError,
    SimplicialComplex,
    Simplex,
    as_simplex,
    closure,
)
from .generators import Graph, rng_stream

__all__ = [
    "GraphPartition",
    "partition_graph",
    "load_partition",
    "save_partition",
    "one_skeleton_graph",
    "partition_cell",
    "partition_classes",
    "Cover",
    "open_cover",
    "close_cover",
    "cover_from_sets",
    "random_cover",
    "nerve",
    "CoverStats",
    "cover_stats",
]


@dataclass(frozen=True)
class GraphPartition:
    """Assignment of graph vertices to parts 0..p-1; parts may be empty."""

    part: np.ndarray
    p: int

    def __post_init__(self):
        part = np.ascontiguousarray(self.part, dtype=np.int64)
        if len(part) and (part.min() < 0 or part.max() >= self.p):
            raise ValueError("part ids must lie in [0, p)")
        object.__setattr__(self, "part", part)

    @property
    def n(self) -> int:
        return len(self.part)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.part, minlength=self.p)

    def as_sets(self) -> list[set[int]]:
        """Vertex set of each part, indexed by part id (empty parts included)."""
        return [set(np.flatnonzero(self.part == i).tolist()) for i in range(self.p)]


def one_skeleton_graph(K: SimplicialComplex) -> Graph:
    """The graph of vertices and edges of K."""
    edges = K.by_dim[1] if K.dimension >= 1 else np.empty((0, 2), np.int64)
    return Graph(K.n_vertices, edges)


def _bfs_far(offsets: np.ndarray, nbrs: np.ndarray, sources: Sequence[int], n: int) -> int:
    """Vertex at maximum BFS distance from the source set; unreachable wins."""
    dist = np.full(n, -1, dtype=np.int64)
    q: deque[int] = deque()
    for s in sources:
        dist[s] = 0
        q.append(s)
    far = int(sources[0])
    while q:
        v = q.popleft()
        for u in nbrs[offsets[v]: offsets[v + 1]]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                q.append(int(u))
    unreachable = np.flatnonzero(dist < 0)
    if len(unreachable):
        return int(unreachable[0])
    far = int(np.flatnonzero(dist == dist.max())[0])
    return far


def partition_graph(g: Graph, p: int, seed: int) -> GraphPartition:
    """Greedy BFS region growing from p spread-out seeds, then refinement.

    Seeds are chosen farthest-point style starting from a random pivot.
    Parts grow round-robin up to ceil(n/p); stranded vertices join the
    currently smallest part.  Refinement passes move boundary vertices when
    that strictly reduces the edgecut without pushing any part above
    ceil(1.1 * n / p).  Deterministic for a fixed seed.
    """
    n = g.n
    if p < 1 or p > n:
        raise ValueError(f"need 1 <= p <= |V|, got p={p}, |V|={n}")
    offsets, nbrs = g.adjacency()
    rng = rng_stream(seed, "partition_graph")
    pivot = int(rng.integers(n))
    seeds = [_bfs_far(offsets, nbrs, [pivot], n)]
    while len(seeds) < p:
        seeds.append(_bfs_far(offsets, nbrs, seeds, n))

    part = np.full(n, -1, dtype=np.int64)
    target = -(-n // p)
    sizes = np.zeros(p, dtype=np.int64)
    queues: list[deque[int]] = []
    for i, s in enumerate(seeds):
        part[s] = i
        sizes[i] = 1
        queues.append(deque(int(u) for u in nbrs[offsets[s]: offsets[s + 1]]))
    claimed = p
    stalled = 0
    i = 0
    while claimed < n:
        if stalled >= p:
            # every queue exhausted or at capacity: restart from a stranded vertex
            v = int(np.flatnonzero(part < 0)[0])
            dest = int(np.argmin(sizes))
            part[v] = dest
            sizes[dest] += 1
            claimed += 1
            for u in nbrs[offsets[v]: offsets[v + 1]]:
                queues[dest].append(int(u))
            stalled = 0
            continue
        q = queues[i]
        if sizes[i] >= target:
            i = (i + 1) % p
            stalled += 1
            continue
        got = False
        while q:
            v = q.popleft()
            if part[v] < 0:
                part[v] = i
                sizes[i] += 1
                claimed += 1
                for u in nbrs[offsets[v]: offsets[v + 1]]:
                    if part[u] < 0:
                        q.append(int(u))
                got = True
                break
        stalled = 0 if got else stalled + 1
        i = (i + 1) % p

    cap = -(-(11 * n) // (10 * p))
    counts = np.zeros(p, dtype=np.int64)
    for _ in range(10):
        moved = 0
        for v in range(n):
            own = part[v]
            span = nbrs[offsets[v]: offsets[v + 1]]
            if len(span) == 0:
                continue
            touched = []
            for u in span:
                q = part[u]
                if counts[q] == 0:
                    touched.append(q)
                counts[q] += 1
            best_gain = 0
            best_q = -1
            for q in touched:
                if q == own:
                    continue
                gain = counts[q] - counts[own]
                better = gain > best_gain or (gain == best_gain and best_q >= 0 and q < best_q)
                if gain > 0 and better and sizes[q] + 1 <= cap:
                    best_gain = gain
                    best_q = int(q)
            for q in touched:
                counts[q] = 0
            if best_q >= 0:
                part[v] = best_q
                sizes[own] -= 1
                sizes[best_q] += 1
                moved += 1
        if moved == 0:
            break
    return GraphPartition(part, p)


def load_partition(path: str, expected_n: int | None = None) -> GraphPartition:
    """Read a partition file: line i holds the part id of vertex i."""
    ids: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if body == "":
                continue
            try:
                v = int(body, 10)
            except ValueError:
                raise FormatError(f"line {lineno}: {body!r} is not an integer") from None
            if v < 0:
                raise FormatError(f"line {lineno}: negative part id")
            ids.append(v)
    if not ids:
        raise FormatError("empty partition file")
    if expected_n is not None and len(ids) != expected_n:
        raise FormatError(
            f"partition lists {len(ids)} vertices, complex has {expected_n}"
        )
    part = np.asarray(ids, dtype=np.int64)
    p = int(part.max()) + 1
    present = np.zeros(p, dtype=bool)
    present[part] = True
    if not present.all():
        missing = int(np.flatnonzero(~present)[0])
        raise FormatError(f"part ids not dense: {missing} unused below {p - 1}")
    return GraphPartition(part, p)


def save_partition(P: GraphPartition, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(str(int(x)) for x in P.part))
        fh.write("\n")


def partition_cell(P: GraphPartition, simplex: Iterable[int]) -> int:
    """Class of a cell: its vertices' common part, else the shared class p."""
    s = as_simplex(simplex)
    seen = {int(P.part[v]) for v in s}
    if len(seen) == 1:
        return seen.pop()
    return P.p


@dataclass
class Cover:
    """Labelled cover of a complex: bit i of a cell's mask marks set i."""

    complex: SimplicialComplex
    set_count: int
    masks: np.ndarray

    @property
    def words(self) -> int:
        return self.masks.shape[1]

    def label_sizes(self) -> np.ndarray:
        return np.bitwise_count(self.masks).sum(axis=1).astype(np.int64)

    def label(self, cell: "int | Iterable[int]") -> tuple[int, ...]:
        if not isinstance(cell, (int, np.integer)):
            cell = self.complex.index_of(cell)
        row = self.masks[int(cell)]
        out = []
        for w, word in enumerate(row):
            word = int(word)
            while word:
                b = word & -word
                out.append(64 * w + b.bit_length() - 1)
                word ^= b
        return tuple(out)

    def member_mask(self, i: int) -> np.ndarray:
        return (self.masks[:, i // 64] >> np.uint64(i % 64)) & np.uint64(1) != 0

    def set_ids(self, i: int) -> np.ndarray:
        """Global ids of the cells of cover set i, ascending."""
        return np.flatnonzero(self.member_mask(i))

    def set_cells(self, i: int) -> set:
        """Cover set i as a set of simplices."""
        return {self.complex.cell(int(j)) for j in self.set_ids(i)}

    def set_sizes(self) -> np.ndarray:
        return np.asarray(
            [int(self.member_mask(i).sum()) for i in range(self.set_count)],
            dtype=np.int64,
        )

    def carrying_mask(self, face: Iterable[int]) -> np.ndarray:
        """Cells whose label contains every index in `face`."""
        want = _face_bits(face, self.words)
        return ((self.masks & want) == want).all(axis=1)

    def is_closed(self) -> bool:
        K = self.complex
        for d in range(1, K.dimension + 1):
            lo = K.dim_offsets[d - 1]
            hi = K.dim_offsets[d]
            fid = K.face_ids(d) - lo
            cell_masks = self.masks[hi:hi + len(K.by_dim[d])]
            face_masks = self.masks[lo:hi]
            for drop in range(fid.shape[1]):
                if ((cell_masks & ~face_masks[fid[:, drop]]) != 0).any():
                    return False
        return True


def _face_bits(face: Iterable[int], words: int) -> np.ndarray:
    out = np.zeros(words, dtype=np.uint64)
    for i in face:
        out[i // 64] |= np.uint64(1) << np.uint64(i % 64)
    return out


def _mask_words(set_count: int) -> int:
    return max(1, -(-set_count // 64))


def partition_classes(K: SimplicialComplex, P: GraphPartition) -> np.ndarray:
    """Per-cell class: the vertices' common part, or the shared class p."""
    if K.n_vertices != P.n:
        raise ValueError("partition and complex disagree on vertex count")
    out = np.empty(len(K), dtype=np.int64)
    for d in range(K.dimension + 1):
        cells = K.by_dim[d]
        if len(cells) == 0:
            continue
        parts = P.part[cells]
        lo = K.dim_offsets[d]
        out[lo:lo + len(cells)] = np.where(
            (parts == parts[:, :1]).all(axis=1), parts[:, 0], P.p
        )
    return out


def open_cover(K: SimplicialComplex, P: GraphPartition) -> Cover:
    """Disjoint classes: cells inside one part keep it, straddlers go to p."""
    cls = partition_classes(K, P)
    p = P.p
    W = _mask_words(p + 1)
    masks = np.zeros((len(K), W), dtype=np.uint64)
    if len(cls):
        masks[np.arange(len(cls)), cls // 64] |= np.uint64(1) << (
            cls % 64
        ).astype(np.uint64)
    return Cover(K, p + 1, masks)


def close_cover(c: Cover) -> Cover:
    """Close every cover set downward under faces.

    For a partition cover only the shared class grows: its cells' faces gain
    label p on top of their own class.
    """
    K = c.complex
    masks = c.masks.copy()
    for d in range(K.dimension, 0, -1):
        lo = K.dim_offsets[d - 1]
        hi = lo + len(K.by_dim[d - 1])
        fid = K.face_ids(d) - lo
        cell_masks = masks[K.dim_offsets[d]: K.dim_offsets[d] + len(K.by_dim[d])]
        sub = masks[lo:hi]
        for drop in range(fid.shape[1]):
            np.bitwise_or.at(sub, fid[:, drop], cell_masks)
    return Cover(K, c.set_count, masks)


def cover_from_sets(
    K: SimplicialComplex, sets: Sequence[Iterable[Iterable[int]]]
) -> Cover:
    """Cover from explicit cell collections; every cell must land somewhere."""
    W = _mask_words(len(sets))
    masks = np.zeros((len(K), W), dtype=np.uint64)
    for i, cells in enumerate(sets):
        for cell in cells:
            j = K.index_of(cell)
            masks[j, i // 64] |= np.uint64(1) << np.uint64(i % 64)
    if (masks == 0).all(axis=1).any():
        missing = int(np.flatnonzero((masks == 0).all(axis=1))[0])
        raise ValueError(f"cell {K.cell(missing)} not covered by any set")
    return Cover(K, len(sets), masks)


def random_cover(K: SimplicialComplex, seed: int, max_sets: int = 5) -> Cover:
    """Random closed cover: maximal cells thrown into 1..max_sets closed sets.

    Triple intersections are allowed, unlike partition covers.
    """
    from .complexes import maximal_cells

    rng = rng_stream(seed, "random_cover")
    k = int(rng.integers(1, max_sets + 1))
    tops = sorted(maximal_cells(K))
    assigned: list[list[Simplex]] = [[] for _ in range(k)]
    for cell in tops:
        picks = np.flatnonzero(rng.random(k) < 0.4)
        if len(picks) == 0:
            picks = [int(rng.integers(k))]
        for i in picks:
            assigned[int(i)].append(cell)
    sets = []
    for cells in assigned:
        sets.append(list(closure(cells).cells()) if cells else [])
    return cover_from_sets(K, sets)


def nerve(c: Cover) -> SimplicialComplex:
    """Nerve of the cover: face J present iff some cell carries all of J."""
    if len(c.masks) == 0:
        return SimplicialComplex([], c.set_count)
    distinct = unique_rows(c.masks)
    label_sets = []
    for row in distinct:
        out = []
        for w, word in enumerate(row):
            word = int(word)
            while word:
                b = word & -word
                out.append(64 * w + b.bit_length() - 1)
                word ^= b
        label_sets.append(tuple(out))
    return closure(label_sets, n_vertices=c.set_count)


@dataclass(frozen=True)
class CoverStats:
    """Balance, cut and blowup statistics for one cover (+ its partition)."""

    graph_balance_ratio: float | None
    cover_balance_ratio: float
    edgecut: int | None
    intersection_size: int
    predicted_blowup: Fraction
    triple_free: bool
    set_sizes: tuple[int, ...]
    part_sizes: tuple[int, ...] | None


def cover_stats(
    c: Cover,
    P: GraphPartition | None = None,
    K: SimplicialComplex | None = None,
) -> CoverStats:
    """Cover statistics; predicted blowup 1 + 2|I|/|K| is exact only when no
    cell carries three labels (otherwise it is a lower bound and flagged)."""
    if K is not None and K is not c.complex:
        raise ValueError("cover was built over a different complex")
    K = c.complex
    m = len(K)
    sizes = c.set_sizes()
    label_sizes = c.label_sizes()
    inter = int((label_sizes >= 2).sum())
    triple_free = bool((label_sizes <= 2).all())
    cover_balance = float(sizes.max()) / m if m else 0.0
    predicted = Fraction(1) + Fraction(2 * inter, m) if m else Fraction(1)
    graph_balance = None
    edgecut = None
    part_sizes = None
    if P is not None:
        g = one_skeleton_graph(K)
        if P.n != g.n:
            raise ValueError("partition does not match the complex's vertices")
        psz = P.sizes()
        graph_balance = float(psz.max()) / P.n if P.n else 0.0
        if len(g.edges):
            edgecut = int((P.part[g.edges[:, 0]] != P.part[g.edges[:, 1]]).sum())
        else:
            edgecut = 0
        part_sizes = tuple(int(x) for x in psz)
    return CoverStats(
        graph_balance_ratio=graph_balance,
        cover_balance_ratio=cover_balance,
        edgecut=edgecut,
        intersection_size=inter,
        predicted_blowup=predicted,
        triple_free=triple_free,
        set_sizes=tuple(int(x) for x in sizes),
        part_sizes=part_sizes,
    )
