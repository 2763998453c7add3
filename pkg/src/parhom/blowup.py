"""The Mayer-Vietoris blowup complex of a closed cover.

Cells are products (sigma, J) of a base cell and a nonempty subset J of its
labels; J is then automatically a nerve face and sigma lies in the
intersection K^J.  Over Z2 the product boundary is

    d(sigma x J) = (d sigma) x J  +  sigma x (d J)

with no signs.  Cells are ordered segment by segment: nerve faces in nerve
filtration order, and inside a segment the base cells in base filtration
order.  With lexicographic filtrations on both factors (the default), all
nerve-vertex segments come first, which is what the parallel driver's local
phase relies on.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .complexes import (
    Filtration,
    Simplex,
    SimplicialComplex,
    StructuralError,
    as_simplex,
    lexicographic_filtration,
)
from .covers import Cover, nerve
from .homology import BoundaryMatrix

__all__ = [
    "ProductCell",
    "BlowupComplex",
    "build_blowup_complex",
    "blowup_boundary",
    "blowup_filtration",
    "blowup_matrix",
    "blowup_factor",
    "dump_blowup",
]


@dataclass(frozen=True)
class ProductCell:
    """A blowup cell: base simplex times a simplex of the nerve."""

    base: Simplex
    nerve_face: Simplex

    @property
    def dim(self) -> int:
        return len(self.base) - 1 + len(self.nerve_face) - 1


class BlowupComplex:
    """Blowup cells stored as per-nerve-face segments of base cell ids."""

    def __init__(
        self,
        base: SimplicialComplex,
        cover: Cover,
        nerve_complex: SimplicialComplex,
        faces: list[Simplex],
        segments: list[np.ndarray],
    ):
        self.base = base
        self.cover = cover
        self.nerve_complex = nerve_complex
        self.faces = tuple(faces)
        self.segments = tuple(segments)
        offs = np.zeros(len(faces) + 1, dtype=np.int64)
        for i, seg in enumerate(segments):
            offs[i + 1] = offs[i] + len(seg)
        self.seg_offsets = offs
        self._face_pos = {f: i for i, f in enumerate(self.faces)}

    def __len__(self) -> int:
        return int(self.seg_offsets[-1])

    def segment_of(self, face: Iterable[int]) -> int:
        return self._face_pos[as_simplex(face)]

    def index_of(self, cell: "ProductCell | tuple") -> int:
        if isinstance(cell, ProductCell):
            base, face = cell.base, cell.nerve_face
        else:
            base, face = cell
        si = self.segment_of(face)
        bid = self.base.index_of(base)
        seg = self.segments[si]
        pos = int(np.searchsorted(seg, bid))
        if pos >= len(seg) or seg[pos] != bid:
            raise KeyError(cell)
        return int(self.seg_offsets[si]) + pos

    def cell(self, i: int) -> ProductCell:
        si = int(np.searchsorted(self.seg_offsets, i, side="right")) - 1
        if not 0 <= i < len(self):
            raise IndexError(i)
        bid = int(self.segments[si][i - self.seg_offsets[si]])
        return ProductCell(self.base.cell(bid), self.faces[si])

    def cells(self) -> Iterator[ProductCell]:
        for si, seg in enumerate(self.segments):
            face = self.faces[si]
            for bid in seg:
                yield ProductCell(self.base.cell(int(bid)), face)

    def cell_dims(self) -> np.ndarray:
        base_dims = self.base.cell_dims()
        out = np.empty(len(self), dtype=np.int64)
        for si, seg in enumerate(self.segments):
            lo, hi = self.seg_offsets[si], self.seg_offsets[si + 1]
            out[lo:hi] = base_dims[seg] + (len(self.faces[si]) - 1)
        return out

    def vertex_segment_count(self) -> int:
        """Number of leading segments whose nerve face is a vertex."""
        k = 0
        for f in self.faces:
            if len(f) != 1:
                break
            k += 1
        return k


def build_blowup_complex(
    K: SimplicialComplex, cover: Cover, workers: int = 1
) -> BlowupComplex:
    """Enumerate blowup cells with a two-pass count-then-fill over base cells.

    Base cells are split into contiguous chunks; pass one counts members per
    (chunk, nerve face), a prefix sum turns counts into write offsets, pass
    two fills each chunk's slots.  The result is identical for any worker
    count.
    """
    if cover.complex is not K:
        raise ValueError("cover was built for a different complex")
    N = nerve(cover)
    faces = list(N.cells())
    m = len(K)
    workers = max(1, min(workers, m)) if m else 1
    bounds = np.linspace(0, m, workers + 1).astype(np.int64)
    member = [cover.carrying_mask(f) for f in faces]

    counts = np.zeros((workers, len(faces)), dtype=np.int64)

    def count_chunk(w: int) -> None:
        lo, hi = bounds[w], bounds[w + 1]
        for fi in range(len(faces)):
            counts[w, fi] = int(member[fi][lo:hi].sum())

    def run(fn):
        if workers == 1:
            for w in range(workers):
                fn(w)
        else:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                list(ex.map(fn, range(workers)))

    run(count_chunk)
    seg_sizes = counts.sum(axis=0)
    seg_starts = np.zeros(len(faces) + 1, dtype=np.int64)
    np.cumsum(seg_sizes, out=seg_starts[1:])
    # write offset of (chunk w, face fi) inside segment fi
    chunk_off = np.zeros_like(counts)
    np.cumsum(counts[:-1], axis=0, out=chunk_off[1:])
    segments = [np.empty(int(s), dtype=np.int64) for s in seg_sizes]

    def fill_chunk(w: int) -> None:
        lo, hi = bounds[w], bounds[w + 1]
        for fi in range(len(faces)):
            ids = np.flatnonzero(member[fi][lo:hi]) + lo
            at = chunk_off[w, fi]
            segments[fi][at: at + len(ids)] = ids

    run(fill_chunk)
    return BlowupComplex(K, cover, N, faces, segments)


def blowup_boundary(cell: "ProductCell | tuple", B: BlowupComplex) -> set[int]:
    """Boundary of one blowup cell as a set of cell positions in B (Z2, no signs)."""
    if not isinstance(cell, ProductCell):
        cell = ProductCell(as_simplex(cell[0]), as_simplex(cell[1]))
    B.index_of(cell)
    faces: set[ProductCell] = set()
    base, face = cell.base, cell.nerve_face
    if len(base) > 1:
        for i in range(len(base)):
            faces.add(ProductCell(base[:i] + base[i + 1:], face))
    if len(face) > 1:
        for i in range(len(face)):
            faces.add(ProductCell(base, face[:i] + face[i + 1:]))
    out: set[int] = set()
    for f in faces:
        try:
            out.add(B.index_of(f))
        except KeyError:
            raise StructuralError(
                f"cover not closed: face {f.base}x{f.nerve_face} missing"
            ) from None
    return out


def blowup_filtration(
    B: BlowupComplex,
    base_filt: Filtration | None = None,
    nerve_filt: Filtration | None = None,
) -> list[ProductCell]:
    """All blowup cells ordered by (nerve face index, base cell index)."""
    base_filt = base_filt or lexicographic_filtration(B.base)
    nerve_filt = nerve_filt or lexicographic_filtration(B.nerve_complex)
    keyed = []
    for si, seg in enumerate(B.segments):
        face = B.faces[si]
        fk = nerve_filt.index(face)
        for bid in seg:
            keyed.append((fk, int(base_filt.rank[bid]), int(bid), face))
    keyed.sort(key=lambda t: (t[0], t[1]))
    return [ProductCell(B.base.cell(bid), face) for _, _, bid, face in keyed]


def blowup_matrix(B: BlowupComplex) -> BoundaryMatrix:
    """Boundary matrix of the blowup in its two-phase filtration order."""
    K = B.base
    M = len(B)
    base_dims = K.cell_dims()
    lengths = np.zeros(M, dtype=np.int64)
    for si, seg in enumerate(B.segments):
        lo, hi = B.seg_offsets[si], B.seg_offsets[si + 1]
        t = len(B.faces[si]) - 1
        bd = base_dims[seg]
        lengths[lo:hi] = np.where(bd > 0, bd + 1, 0) + (t + 1 if t >= 1 else 0)
    offsets = np.zeros(M + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    entries = np.empty(int(offsets[-1]), dtype=np.int64)
    dims = np.empty(M, dtype=np.int64)

    seg_lookup = {f: i for i, f in enumerate(B.faces)}
    for si, seg in enumerate(B.segments):
        face = B.faces[si]
        t = len(face) - 1
        lo = int(B.seg_offsets[si])
        dims[lo: lo + len(seg)] = base_dims[seg] + t
        if len(seg) == 0:
            continue
        nerve_terms = None
        if t >= 1:
            nerve_terms = np.empty((len(seg), t + 1), dtype=np.int64)
            for k in range(t + 1):
                sub = face[:k] + face[k + 1:]
                sj = seg_lookup[sub]
                other = B.segments[sj]
                pos = np.searchsorted(other, seg)
                bad = (pos >= len(other)) | (
                    other[np.minimum(pos, len(other) - 1)] != seg
                )
                if bad.any():
                    culprit = K.cell(int(seg[np.flatnonzero(bad)[0]]))
                    raise StructuralError(
                        f"cover not closed: {culprit} missing from segment {sub}"
                    )
                nerve_terms[:, k] = B.seg_offsets[sj] + pos
        # slice the segment by base dimension (ids are dimension-major)
        cut = np.searchsorted(seg, K.dim_offsets)
        for d in range(1, K.dimension + 1):
            a, b = int(cut[d]), int(cut[d + 1])
            if a == b:
                continue
            ids = seg[a:b]
            fids = K.face_ids(d)[ids - K.dim_offsets[d]]
            pos = np.searchsorted(seg, fids)
            bad = (pos >= len(seg)) | (seg[np.minimum(pos, len(seg) - 1)] != fids)
            if bad.any():
                r, c = np.divmod(int(np.flatnonzero(bad.ravel())[0]), fids.shape[1])
                culprit = K.cell(int(fids[r, c]))
                raise StructuralError(
                    f"cover not closed: face {culprit} missing from segment {face}"
                )
            cols = lo + a + np.arange(b - a, dtype=np.int64)
            terms = pos + lo
            if nerve_terms is not None:
                terms = np.concatenate([terms, nerve_terms[a:b]], axis=1)
            terms = np.sort(terms, axis=1)
            idx = offsets[cols][:, None] + np.arange(terms.shape[1])[None, :]
            entries[idx.ravel()] = terms.ravel()
        if t >= 1 and int(cut[1]) > 0:
            # base vertices: only the nerve-boundary terms
            a, b = 0, int(cut[1])
            cols = lo + np.arange(a, b, dtype=np.int64)
            terms = np.sort(nerve_terms[a:b], axis=1)
            idx = offsets[cols][:, None] + np.arange(terms.shape[1])[None, :]
            entries[idx.ravel()] = terms.ravel()
    return BoundaryMatrix(entries, offsets, dims)


def blowup_factor(B: BlowupComplex) -> Fraction:
    """|K^U| / |K| as an exact rational."""
    if len(B.base) == 0:
        return Fraction(1)
    return Fraction(len(B), len(B.base))


def dump_blowup(B: BlowupComplex, path: str) -> None:
    """One cell per line: '<base vertices>|<nerve indices>' in filtration order."""
    with open(path, "w", encoding="utf-8") as fh:
        for cell in B.cells():
            left = " ".join(str(v) for v in cell.base)
            right = " ".join(str(i) for i in cell.nerve_face)
            fh.write(f"{left}|{right}\n")
