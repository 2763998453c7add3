"""Randomized agreement harness: serial vs parallel vs rank oracle.

Each trial draws a small random flag complex, computes Betti numbers along
every route (serial reduction, blowup at several part counts, re-filtered
heuristic at the same counts, dense GF(2) ranks) and demands exact
agreement.  Any mismatch is reported with a replayable .cplx dump.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .complexes import SimplicialComplex, lexicographic_filtration, skeleton
from .generators import Graph, flag_complex, rng_stream
from .homology import BettiNumbers, betti, build_boundary_matrix, pair_cells, rank_oracle
from .parallel import heuristic_mh, multicore_homology, serial_homology

__all__ = ["VerifyOutcome", "random_instance", "verify_agreement"]


@dataclass(frozen=True)
class VerifyOutcome:
    ok: bool
    checked: int
    counterexample: str | None


def random_instance(rng: np.random.Generator, max_vertices: int) -> SimplicialComplex:
    """A small random flag complex, sometimes truncated to a skeleton."""
    n = int(rng.integers(1, max_vertices + 1))
    prob = float(rng.uniform(0.2, 0.9))
    iu = np.triu_indices(n, k=1)
    keep = rng.random(len(iu[0])) < prob
    edges = np.column_stack([iu[0][keep], iu[1][keep]]).astype(np.int64)
    K = flag_complex(Graph(n, edges), max_dim=max(n - 1, 0) or 1)
    if K.dimension >= 1 and rng.random() < 0.25:
        K = skeleton(K, int(rng.integers(0, K.dimension + 1)))
    return K


def _cplx_text(K: SimplicialComplex) -> str:
    buf = io.StringIO()
    for cell in K.cells():
        buf.write(" ".join(str(v) for v in cell))
        buf.write("\n")
    return buf.getvalue()


def _faulty_mv_betti(K: SimplicialComplex, parts: int, seed: int) -> BettiNumbers:
    """The mv route with one boundary entry dropped (harness self-test)."""
    from .blowup import blowup_matrix, build_blowup_complex
    from .covers import close_cover, open_cover, partition_graph
    from .covers import one_skeleton_graph

    P = partition_graph(one_skeleton_graph(K), min(parts, K.n_vertices), seed)
    cover = close_cover(open_cover(K, P))
    B = build_blowup_complex(K, cover)
    matrix = blowup_matrix(B)
    nonzero = np.flatnonzero(np.diff(matrix.offsets) > 0)
    if len(nonzero) == 0:
        return BettiNumbers(())
    j = int(nonzero[-1])
    keep = np.ones(len(matrix.entries), dtype=bool)
    keep[matrix.offsets[j]] = False
    matrix.entries = matrix.entries[keep]
    matrix.offsets = matrix.offsets.copy()
    matrix.offsets[j + 1:] -= 1
    pairing = pair_cells(matrix)
    return betti(pairing, matrix.dims)


def verify_agreement(
    trials: int,
    max_vertices: int,
    seed: int,
    parts: tuple[int, ...] = (1, 2, 4),
    inject_fault: bool = False,
) -> VerifyOutcome:
    """Run the agreement check; stops at the first disagreement."""
    rng = rng_stream(seed, "verify")
    for i in range(trials):
        K = random_instance(rng, max_vertices)
        results: dict[str, BettiNumbers] = {}
        results["serial"] = serial_homology(K).betti
        matrix = build_boundary_matrix(lexicographic_filtration(K))
        results["rank_oracle"] = rank_oracle(matrix)
        for p in parts:
            q = min(p, K.n_vertices)
            if inject_fault and i == 0 and p == parts[0]:
                results[f"mv p={p}"] = _faulty_mv_betti(K, p, seed)
            else:
                results[f"mv p={p}"] = multicore_homology(K, workers=p, parts=q, seed=seed).betti
            results[f"heuristic p={p}"] = heuristic_mh(K, workers=p, parts=q, seed=seed).betti
        reference = results["serial"]
        bad = {k: v for k, v in results.items() if v != reference}
        if bad:
            lines = [f"disagreement on instance {i} (seed {seed})"]
            for name, b in results.items():
                flag = "  <-- differs" if name in bad else ""
                lines.append(f"  {name}: {b}{flag}")
            lines.append(".cplx:")
            lines.append(_cplx_text(K).rstrip("\n"))
            return VerifyOutcome(False, i + 1, "\n".join(lines))
    return VerifyOutcome(True, trials, None)
