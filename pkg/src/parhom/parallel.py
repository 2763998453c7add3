"""Serial and parallel homology drivers.

Both parallel algorithms split the boundary matrix into independent column
blocks that standard reduction never couples, reduce the blocks concurrently
(the numba kernel drops the GIL, so plain threads share the matrix), merge
the per-block states in block order, and finish the remaining columns with
one serial pass.  Results are bitwise deterministic for a fixed input and
worker count: scheduling can only change timings, never the pairing.
"""
from __future__ import annotations

import resource
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .blowup import BlowupComplex, blowup_factor, blowup_matrix, build_blowup_complex
from .complexes import Filtration, SimplicialComplex, StructuralError, lexicographic_filtration
from .covers import (
    Cover,
    CoverStats,
    GraphPartition,
    close_cover,
    cover_stats,
    one_skeleton_graph,
    open_cover,
    partition_classes,
    partition_graph,
)
from .homology import (
    BettiNumbers,
    BoundaryMatrix,
    PersistencePairing,
    ReductionState,
    betti,
    build_boundary_matrix,
    merge_states,
    pair_cells,
)

__all__ = [
    "ParallelPlan",
    "RunReport",
    "validate_plan",
    "serial_homology",
    "multicore_homology",
    "heuristic_mh",
]


@dataclass(frozen=True)
class ParallelPlan:
    """Disjoint ascending column blocks plus the serial tail span."""

    blocks: tuple[tuple[int, int], ...]
    tail: tuple[int, int]
    workers: int


@dataclass
class RunReport:
    """Outcome of one homology run."""

    algorithm: str
    workers: int
    parts: int | None
    phase_seconds: dict[str, float]
    peak_memory_mb: float | None
    betti: BettiNumbers
    cover_stats: CoverStats | None
    pairing: PersistencePairing
    cell_count: int
    matrix_columns: int
    additions: int
    blowup: BlowupComplex | None = None


def _peak_memory_mb() -> float:
    # ru_maxrss is in KiB on Linux; lifetime high-water mark, best effort
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


def validate_plan(matrix: BoundaryMatrix, plan: ParallelPlan) -> None:
    """Check structurally that every block only references its own rows."""
    prev = 0
    for s, e in plan.blocks:
        if not 0 <= s <= e <= matrix.m or s < prev:
            raise StructuralError("blocks must be disjoint and ascending")
        prev = e
        seg = matrix.entries[matrix.offsets[s]: matrix.offsets[e]]
        if len(seg) and (int(seg.min()) < s or int(seg.max()) >= e):
            raise StructuralError(
                f"block [{s}, {e}) references rows outside itself"
            )
    ts, te = plan.tail
    if ts < prev or te != matrix.m:
        raise StructuralError("tail must cover the columns after the last block")


def _reduce_with_plan(
    matrix: BoundaryMatrix, plan: ParallelPlan
) -> tuple[ReductionState, PersistencePairing, dict[str, float]]:
    validate_plan(matrix, plan)
    done: list[tuple[tuple[int, int], ReductionState]] = [None] * len(plan.blocks)
    busy: dict[int, float] = {}
    lock = threading.Lock()

    def work(i: int) -> None:
        s, e = plan.blocks[i]
        nnz = int(matrix.offsets[e] - matrix.offsets[s])
        st = ReductionState.fresh(s, e - s, pool_hint=nnz)
        t0 = time.perf_counter()
        pair_cells(matrix, (s, e), "absolute", st)
        dt = time.perf_counter() - t0
        done[i] = ((s, e), st)
        ident = threading.get_ident()
        with lock:
            busy[ident] = busy.get(ident, 0.0) + dt

    nblocks = len(plan.blocks)
    if nblocks:
        if plan.workers <= 1:
            for i in range(nblocks):
                work(i)
        else:
            with ThreadPoolExecutor(max_workers=min(plan.workers, nblocks)) as ex:
                list(ex.map(work, range(nblocks)))
    makespan = max(busy.values()) if busy else 0.0

    state = merge_states(matrix.m, done) if nblocks else ReductionState.fresh(0, matrix.m)
    t0 = time.perf_counter()
    pair_cells(matrix, plan.tail, "absolute", state)
    tail_dt = time.perf_counter() - t0
    pairing = state.pairing((0, matrix.m))
    times = {
        "reduce_blocks": makespan,
        "reduce_tail": tail_dt,
        "persistence": makespan + tail_dt,
    }
    return state, pairing, times


def serial_homology(K: SimplicialComplex) -> RunReport:
    """Single-span reduction of the lexicographic filtration's matrix."""
    f = lexicographic_filtration(K)
    matrix = build_boundary_matrix(f)
    state = ReductionState.fresh(0, matrix.m, pool_hint=len(matrix.entries))
    t0 = time.perf_counter()
    pairing = pair_cells(matrix, (0, matrix.m), "absolute", state)
    dt = time.perf_counter() - t0
    return RunReport(
        algorithm="serial",
        workers=1,
        parts=None,
        phase_seconds={"persistence": dt},
        peak_memory_mb=_peak_memory_mb(),
        betti=betti(pairing, matrix.dims),
        cover_stats=None,
        pairing=pairing,
        cell_count=len(K),
        matrix_columns=matrix.m,
        additions=state.additions,
    )


def _resolve_partition(
    K: SimplicialComplex,
    parts: int,
    seed: int,
    partition: GraphPartition | None,
) -> GraphPartition:
    if partition is not None:
        if partition.n != K.n_vertices:
            raise ValueError("partition does not match the complex")
        return partition
    return partition_graph(one_skeleton_graph(K), parts, seed)


def multicore_homology(
    K: SimplicialComplex,
    workers: int,
    parts: int | None = None,
    seed: int = 0,
    partition: GraphPartition | None = None,
    cover: Cover | None = None,
) -> RunReport:
    """Homology via parallel reduction of the blowup complex's matrix.

    Phases: cover (partition + open + close), build_blowup (cell enumeration
    plus matrix assembly), persistence (parallel nerve-vertex segments, then
    the higher segments in one serial tail).  An explicit `cover` skips the
    cover phase; `partition` skips just the graph partitioning.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    parts = workers if parts is None else parts
    phases: dict[str, float] = {}
    P = None
    if cover is None:
        t0 = time.perf_counter()
        P = _resolve_partition(K, parts, seed, partition)
        cover = close_cover(open_cover(K, P))
        phases["cover"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    B = build_blowup_complex(K, cover, workers=workers)
    matrix = blowup_matrix(B)
    phases["build_blowup"] = time.perf_counter() - t0

    k = B.vertex_segment_count()
    blocks = tuple(
        (int(B.seg_offsets[i]), int(B.seg_offsets[i + 1])) for i in range(k)
    )
    plan = ParallelPlan(blocks=blocks, tail=(int(B.seg_offsets[k]), len(B)), workers=workers)
    state, pairing, times = _reduce_with_plan(matrix, plan)
    phases.update(times)

    stats = cover_stats(cover, P)
    if stats.triple_free:
        assert blowup_factor(B) == stats.predicted_blowup
    return RunReport(
        algorithm="mv",
        workers=workers,
        parts=parts,
        phase_seconds=phases,
        peak_memory_mb=_peak_memory_mb(),
        betti=betti(pairing, matrix.dims),
        cover_stats=stats,
        pairing=pairing,
        cell_count=len(B),
        matrix_columns=matrix.m,
        additions=state.additions,
        blowup=B,
    )


def heuristic_mh(
    K: SimplicialComplex,
    workers: int,
    parts: int | None = None,
    seed: int = 0,
    partition: GraphPartition | None = None,
) -> RunReport:
    """Homology via a cover-permuted base matrix, no blowup.

    The cells are re-filtered class by class (each open class keeps base
    filtration order internally, the shared class goes last); the class
    blocks reduce in parallel and the shared block serially.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    parts = workers if parts is None else parts
    t0 = time.perf_counter()
    P = _resolve_partition(K, parts, seed, partition)
    cls = partition_classes(K, P)
    phases = {"cover": time.perf_counter() - t0}

    t0 = time.perf_counter()
    order = np.argsort(cls, kind="stable").astype(np.int64)
    f = Filtration(K, order)
    matrix = build_boundary_matrix(f)
    counts = np.bincount(cls, minlength=P.p + 1)
    ends = np.zeros(P.p + 2, dtype=np.int64)
    np.cumsum(counts, out=ends[1:])
    phases["re-filter"] = time.perf_counter() - t0

    blocks = tuple((int(ends[i]), int(ends[i + 1])) for i in range(P.p))
    plan = ParallelPlan(blocks=blocks, tail=(int(ends[P.p]), matrix.m), workers=workers)
    state, pairing, times = _reduce_with_plan(matrix, plan)
    phases.update(times)

    stats = cover_stats(close_cover(open_cover(K, P)), P)
    return RunReport(
        algorithm="heuristic",
        workers=workers,
        parts=parts,
        phase_seconds=phases,
        peak_memory_mb=_peak_memory_mb(),
        betti=betti(pairing, matrix.dims),
        cover_stats=stats,
        pairing=pairing,
        cell_count=len(K),
        matrix_columns=matrix.m,
        additions=state.additions,
    )
