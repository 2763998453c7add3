"""Benchmark harness: timings, speedups and the CSV report.

Every (input, algorithm, worker count) triple runs `trials` times; the CSV
row carries mean phase wall times, the speedup against a serial baseline
measured in the same session, and cover statistics.  Serial rows report the
degenerate single-part view (one part, no cut, factor 1).  A Betti
disagreement between any run and the serial baseline aborts the whole
benchmark: timings of wrong answers are worthless.
"""
from __future__ import annotations

from dataclasses import dataclass
from statistics import mean
from typing import Sequence

from .complexes import SimplicialComplex
from .generators import path_complex
from .parallel import RunReport, heuristic_mh, multicore_homology, serial_homology

__all__ = ["CSV_HEADER", "BenchmarkError", "BenchRow", "run_benchmark", "write_csv"]

CSV_HEADER = (
    "input,algorithm,num_partitions,num_threads,graph_balance_ratio,"
    "cover_balance_ratio,edgecut,blowup_factor,build_blowup,re-filter,"
    "persistence,speedup,max_memory_mb"
)


class BenchmarkError(RuntimeError):
    """Betti numbers disagreed between algorithms; benchmark aborted."""


@dataclass(frozen=True)
class BenchRow:
    input: str
    algorithm: str
    num_partitions: int
    num_threads: int
    graph_balance_ratio: float
    cover_balance_ratio: float
    edgecut: int
    blowup_factor: float
    build_blowup: float | None
    re_filter: float | None
    persistence: float
    speedup: float
    max_memory_mb: float

    def csv_values(self) -> list[str]:
        def num(x: float) -> str:
            return f"{x:.6g}"

        return [
            self.input,
            self.algorithm,
            str(self.num_partitions),
            str(self.num_threads),
            num(self.graph_balance_ratio),
            num(self.cover_balance_ratio),
            str(self.edgecut),
            num(self.blowup_factor),
            "" if self.build_blowup is None else num(self.build_blowup),
            "" if self.re_filter is None else num(self.re_filter),
            num(self.persistence),
            num(self.speedup),
            num(self.max_memory_mb),
        ]


def _mean_phase(reports: Sequence[RunReport], phase: str) -> float | None:
    vals = [r.phase_seconds[phase] for r in reports if phase in r.phase_seconds]
    return mean(vals) if vals else None


def run_benchmark(
    inputs: Sequence[tuple[str, SimplicialComplex]],
    threads_list: Sequence[int],
    trials: int = 10,
    seed: int = 0,
    algorithms: Sequence[str] = ("serial", "mv", "heuristic"),
) -> list[BenchRow]:
    """Benchmark every requested combination; deterministic apart from time
    and memory columns for a fixed seed."""
    serial_homology(path_complex(3))  # warm the jit kernel outside any timing
    rows: list[BenchRow] = []
    for name, K in inputs:
        serial_reports = [serial_homology(K) for _ in range(trials)]
        baseline = _mean_phase(serial_reports, "persistence")
        reference = serial_reports[0].betti
        if "serial" in algorithms:
            rows.append(
                BenchRow(
                    input=name,
                    algorithm="serial",
                    num_partitions=1,
                    num_threads=1,
                    graph_balance_ratio=1.0,
                    cover_balance_ratio=1.0,
                    edgecut=0,
                    blowup_factor=1.0,
                    build_blowup=None,
                    re_filter=None,
                    persistence=baseline,
                    speedup=1.0,
                    max_memory_mb=max(r.peak_memory_mb for r in serial_reports),
                )
            )
        for alg in algorithms:
            if alg == "serial":
                continue
            runner = {"mv": multicore_homology, "heuristic": heuristic_mh}[alg]
            for p in threads_list:
                reports = [
                    runner(K, workers=p, parts=p, seed=seed) for _ in range(trials)
                ]
                for r in reports:
                    if r.betti != reference:
                        raise BenchmarkError(
                            f"{name}: {alg} at p={p} computed {r.betti}, "
                            f"serial computed {reference}"
                        )
                st = reports[0].cover_stats
                persistence = _mean_phase(reports, "persistence")
                rows.append(
                    BenchRow(
                        input=name,
                        algorithm=alg,
                        num_partitions=p,
                        num_threads=p,
                        graph_balance_ratio=st.graph_balance_ratio,
                        cover_balance_ratio=st.cover_balance_ratio,
                        edgecut=st.edgecut,
                        blowup_factor=float(st.predicted_blowup),
                        build_blowup=_mean_phase(reports, "build_blowup"),
                        re_filter=_mean_phase(reports, "re-filter"),
                        persistence=persistence,
                        speedup=baseline / persistence if persistence else 0.0,
                        max_memory_mb=max(r.peak_memory_mb for r in reports),
                    )
                )
    return rows


def write_csv(rows: Sequence[BenchRow], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(",".join(row.csv_values()) + "\n")
