"""Z2 homology of simplicial complexes with cover-based parallel reduction."""
from .bench import CSV_HEADER, BenchmarkError, BenchRow, run_benchmark, write_csv
from .blowup import (
    BlowupComplex,
    ProductCell,
    blowup_boundary,
    blowup_factor,
    blowup_filtration,
    blowup_matrix,
    build_blowup_complex,
    dump_blowup,
)
from .complexes import (
    Filtration,
    FormatError,
    Simplex,
    SimplicialComplex,
    StructuralError,
    as_simplex,
    boundary,
    closure,
    lexicographic_filtration,
    load_complex,
    maximal_cells,
    save_complex,
    skeleton,
    validate_filtration,
)
from .covers import (
    Cover,
    CoverStats,
    GraphPartition,
    close_cover,
    cover_from_sets,
    cover_stats,
    load_partition,
    nerve,
    one_skeleton_graph,
    open_cover,
    partition_cell,
    partition_classes,
    partition_graph,
    random_cover,
    save_partition,
)
from .generators import (
    Graph,
    PointCloud,
    diagonal_embed,
    erdos_renyi,
    flag_complex,
    full_simplex_complex,
    load_points,
    multiblob,
    multiblob_cell_count,
    path_complex,
    rng_stream,
    save_points,
    sphere_sample,
    vietoris_rips,
)
from .homology import (
    RANK_ORACLE_LIMIT,
    BettiNumbers,
    BoundaryMatrix,
    PersistencePairing,
    ReductionState,
    betti,
    build_boundary_matrix,
    merge_states,
    pair_cells,
    rank_oracle,
)
from .parallel import (
    ParallelPlan,
    RunReport,
    heuristic_mh,
    multicore_homology,
    serial_homology,
    validate_plan,
)
from .verify import VerifyOutcome, random_instance, verify_agreement

__version__ = "0.1.0"

__all__ = [
    "BenchRow",
    "BenchmarkError",
    "BettiNumbers",
    "BlowupComplex",
    "BoundaryMatrix",
    "CSV_HEADER",
    "Cover",
    "CoverStats",
    "Filtration",
    "FormatError",
    "Graph",
    "GraphPartition",
    "ParallelPlan",
    "PersistencePairing",
    "PointCloud",
    "ProductCell",
    "RANK_ORACLE_LIMIT",
    "ReductionState",
    "RunReport",
    "Simplex",
    "SimplicialComplex",
    "StructuralError",
    "VerifyOutcome",
    "as_simplex",
    "betti",
    "blowup_boundary",
    "blowup_factor",
    "blowup_filtration",
    "blowup_matrix",
    "boundary",
    "build_blowup_complex",
    "build_boundary_matrix",
    "close_cover",
    "closure",
    "cover_from_sets",
    "cover_stats",
    "diagonal_embed",
    "dump_blowup",
    "erdos_renyi",
    "flag_complex",
    "full_simplex_complex",
    "heuristic_mh",
    "lexicographic_filtration",
    "load_complex",
    "load_partition",
    "load_points",
    "maximal_cells",
    "merge_states",
    "multiblob",
    "multiblob_cell_count",
    "multicore_homology",
    "nerve",
    "one_skeleton_graph",
    "open_cover",
    "pair_cells",
    "partition_cell",
    "partition_classes",
    "partition_graph",
    "path_complex",
    "random_cover",
    "random_instance",
    "rank_oracle",
    "rng_stream",
    "run_benchmark",
    "save_complex",
    "save_partition",
    "save_points",
    "serial_homology",
    "skeleton",
    "sphere_sample",
    "validate_filtration",
    "validate_plan",
    "verify_agreement",
    "vietoris_rips",
    "write_csv",
]
