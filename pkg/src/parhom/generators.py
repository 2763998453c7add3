"""Synthetic inputs: complexes, graphs and point clouds.

Randomized generators draw from PCG64 streams derived as
`SeedSequence(seed, spawn_key=(tag,))` with one fixed tag per operation
(see _STREAM_TAGS), so the same seed can drive several operations without
correlated output and results are reproducible across platforms.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._rows import lexsort_rows, unique_rows
from .complexes import FormatError, SimplicialComplex

__all__ = [
    "PointCloud",
    "Graph",
    "rng_stream",
    "path_complex",
    "full_simplex_complex",
    "multiblob",
    "multiblob_cell_count",
    "flag_complex",
    "vietoris_rips",
    "erdos_renyi",
    "sphere_sample",
    "diagonal_embed",
    "load_points",
    "save_points",
]

_STREAM_TAGS = {
    "erdos_renyi": 1,
    "sphere_sample": 2,
    "partition_graph": 3,
    "random_cover": 4,
    "verify": 5,
    "bench": 6,
}


def rng_stream(seed: int, op: str) -> np.random.Generator:
    """Dedicated PCG64 stream for one named operation."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    tag = _STREAM_TAGS[op]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(tag,))))


@dataclass(frozen=True)
class PointCloud:
    """Points in R^d, one per row."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise ValueError("points must form a 2-D array with at least one column")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices [0, n)."""

    n: int
    edges: np.ndarray

    def __post_init__(self):
        e = np.ascontiguousarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if len(e):
            if e.min() < 0 or e.max() >= self.n:
                raise ValueError("edge endpoint out of range")
            if (e[:, 0] >= e[:, 1]).any():
                raise ValueError("edges must satisfy u < v")
            e = unique_rows(e)
        object.__setattr__(self, "edges", e)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR neighbor lists: (offsets, neighbors), neighbors sorted."""
        both = np.concatenate([self.edges, self.edges[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        counts = np.bincount(both[:, 0], minlength=self.n)
        offsets = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        return offsets, both[:, 1].copy()


def path_complex(n: int) -> SimplicialComplex:
    """Path on n vertices: edges (i, i+1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    verts = np.arange(n, dtype=np.int64).reshape(-1, 1)
    if n == 1:
        return SimplicialComplex([verts], n)
    edges = np.column_stack([np.arange(n - 1), np.arange(1, n)]).astype(np.int64)
    return SimplicialComplex([verts, edges], n)


def _combinations_array(n: int, k: int) -> np.ndarray:
    if k > n:
        return np.empty((0, k), dtype=np.int64)
    return np.asarray(list(combinations(range(n), k)), dtype=np.int64).reshape(-1, k)


def full_simplex_complex(n: int) -> SimplicialComplex:
    """The full simplex on n vertices: every nonempty subset, 2^n - 1 cells."""
    if not 1 <= n <= 25:
        raise ValueError("n must be in [1, 25]")
    by_dim = [_combinations_array(n, d + 1) for d in range(n)]
    return SimplicialComplex(by_dim, n)


def multiblob_cell_count(copies: int, blob_vertices: int, groups: int) -> int:
    """Closed-form cell count: copies full blobs plus copies-1 junction edges."""
    return copies * (2**blob_vertices - 1) + (copies - 1)


def multiblob(copies: int, blob_vertices: int, groups: int) -> SimplicialComplex:
    """Chained full-simplex blobs.

    Copies are split into `groups` contiguous runs of equal length.  Within a
    group consecutive copies are joined by an edge from vertex 0 of copy i to
    vertex 0 of copy i+1; the head copies of consecutive groups are joined the
    same way.  The result is connected and contractible.
    """
    if copies < 1 or groups < 1:
        raise ValueError("copies and groups must be >= 1")
    if blob_vertices < 2:
        raise ValueError("blob_vertices must be >= 2")
    if copies % groups:
        raise ValueError("groups must divide copies")
    b = blob_vertices
    blob = [_combinations_array(b, d + 1) for d in range(b)]
    offsets = np.arange(copies, dtype=np.int64) * b

    per_group = copies // groups
    heads = np.arange(groups, dtype=np.int64) * per_group
    # ports: vertex 0 of copy i to vertex 0 of copy i+1 within a group,
    # head copy to head copy across consecutive groups
    within = np.concatenate(
        [np.arange(h, h + per_group - 1) for h in heads]
    ) if per_group > 1 else np.empty(0, np.int64)
    tails = np.concatenate([within, heads[:-1]])
    nexts = np.concatenate([within + 1, heads[1:]])
    junctions = np.column_stack([tails * b, nexts * b])

    by_dim: list[np.ndarray] = []
    for d in range(b):
        block = blob[d]
        tiled = (block[None, :, :] + offsets[:, None, None]).reshape(-1, d + 1)
        if d == 1 and len(junctions):
            tiled = lexsort_rows(np.concatenate([tiled, junctions]))
        by_dim.append(tiled)
    return SimplicialComplex(by_dim, copies * b)


def flag_complex(g: Graph, max_dim: int) -> SimplicialComplex:
    """Cliques of g up to max_dim+1 vertices (the flag complex's max_dim-skeleton)."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    verts = np.arange(g.n, dtype=np.int64).reshape(-1, 1)
    by_dim: list[np.ndarray] = [verts]
    if max_dim == 0 or g.edge_count == 0:
        return SimplicialComplex(by_dim[: max_dim + 1] if g.n else [], g.n)
    offsets, nbrs = g.adjacency()
    # forward neighbor lists: sorted neighbors greater than the vertex
    fwd: list[np.ndarray] = []
    for v in range(g.n):
        nb = nbrs[offsets[v]: offsets[v + 1]]
        fwd.append(nb[nb > v])
    level = g.edges
    by_dim.append(level)
    d = 1
    while d < max_dim and len(level):
        rows: list[np.ndarray] = []
        for row in level:
            cand = fwd[row[0]]
            for v in row[1:]:
                if len(cand) == 0:
                    break
                other = fwd[v]
                pos = np.searchsorted(other, cand)
                ok = pos < len(other)
                ok[ok] = other[pos[ok]] == cand[ok]
                cand = cand[ok]
            if len(cand):
                ext = np.empty((len(cand), d + 2), dtype=np.int64)
                ext[:, :-1] = row
                ext[:, -1] = cand
                rows.append(ext)
        if not rows:
            break
        level = np.concatenate(rows)
        by_dim.append(level)
        d += 1
    return SimplicialComplex(by_dim, g.n)


def vietoris_rips(cloud: PointCloud, epsilon: float, max_dim: int) -> SimplicialComplex:
    """Vietoris-Rips complex: cliques of the epsilon-distance graph.

    Pairwise distances are evaluated by brute force; simplices appear when all
    pairwise distances are <= epsilon.
    """
    pts = cloud.points
    n = len(pts)
    if n == 0:
        return SimplicialComplex([], 0)
    sq = np.sum(pts * pts, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (pts @ pts.T)
    np.maximum(d2, 0.0, out=d2)
    iu = np.triu_indices(n, k=1)
    close = d2[iu] <= epsilon * epsilon + 1e-12
    edges = np.column_stack([iu[0][close], iu[1][close]]).astype(np.int64)
    return flag_complex(Graph(n, edges), max_dim)


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each of the C(n,2) edges kept independently with probability p."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = rng_stream(seed, "erdos_renyi")
    iu = np.triu_indices(n, k=1)
    keep = rng.random(len(iu[0])) < p
    edges = np.column_stack([iu[0][keep], iu[1][keep]]).astype(np.int64)
    return Graph(n, edges)


def sphere_sample(n: int, sphere_dim: int, seed: int) -> PointCloud:
    """n uniform points on the unit sphere S^sphere_dim in R^(sphere_dim+1).

    Normalized standard normal vectors (Muller's method).
    """
    if n < 0 or sphere_dim < 0:
        raise ValueError("n and sphere_dim must be >= 0")
    rng = rng_stream(seed, "sphere_sample")
    x = rng.standard_normal((n, sphere_dim + 1))
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    # hitting an exactly-zero vector has probability zero; resample if it happens
    while (norms == 0).any():
        bad = norms[:, 0] == 0
        x[bad] = rng.standard_normal((int(bad.sum()), sphere_dim + 1))
        norms = np.linalg.norm(x, axis=1, keepdims=True)
    return PointCloud(x / norms)


def diagonal_embed(cloud: PointCloud) -> PointCloud:
    """x -> (x, x); doubles ambient dimension, scales distances by sqrt(2)."""
    return PointCloud(np.concatenate([cloud.points, cloud.points], axis=1))


def load_points(path: str) -> PointCloud:
    """Read a .pts file: one point per line, decimal coordinates."""
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if body == "":
                continue
            try:
                rows.append([float(tok) for tok in body.split(" ") if tok])
            except ValueError:
                raise FormatError(f"line {lineno}: malformed coordinate") from None
            if len(rows) > 1 and len(rows[-1]) != len(rows[0]):
                raise FormatError(f"line {lineno}: inconsistent dimension")
    if not rows:
        raise FormatError("empty point file")
    return PointCloud(np.asarray(rows, dtype=np.float64))


def save_points(cloud: PointCloud, path: str) -> None:
    """Write a .pts file, full float precision."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in cloud.points:
            fh.write(" ".join(repr(float(x)) for x in row))
            fh.write("\n")
