"""Command line interface.

Exit codes: 0 success, 1 verification/agreement failure, 2 usage error,
3 I/O or file-format error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .bench import BenchmarkError, run_benchmark, write_csv
from .blowup import dump_blowup
from .complexes import FormatError, load_complex, save_complex
from .covers import (
    close_cover,
    cover_stats,
    load_partition,
    one_skeleton_graph,
    open_cover,
    partition_graph,
    save_partition,
)
from .generators import (
    erdos_renyi,
    flag_complex,
    full_simplex_complex,
    load_points,
    multiblob,
    path_complex,
    save_points,
    sphere_sample,
    vietoris_rips,
)
from .parallel import heuristic_mh, multicore_homology, serial_homology
from .verify import verify_agreement


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="parhom",
        description="Z2 homology of simplicial complexes, serially or in parallel",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic complex or point cloud")
    g.add_argument("--kind", required=True,
                   choices=["path", "simplex", "multiblob", "rips", "flag", "sphere"])
    g.add_argument("--n", type=int, help="vertex/point count (blob size for multiblob)")
    g.add_argument("--copies", type=int, default=2, help="multiblob: number of blobs")
    g.add_argument("--groups", type=int, default=1, help="multiblob: number of groups")
    g.add_argument("--epsilon", type=float, help="rips: distance threshold")
    g.add_argument("--max-dim", type=int, default=2, help="rips/flag: top dimension")
    g.add_argument("--prob", type=float, default=0.5, help="flag: edge probability")
    g.add_argument("--sphere-dim", type=int, default=1, help="sphere: sphere dimension")
    g.add_argument("--points", help="rips: read the cloud from a .pts file")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="output file (.cplx, .pts for sphere)")

    v = sub.add_parser("verify", help="randomized agreement check across algorithms")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--max-vertices", type=int, default=8)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-fault", action="store_true",
                   help="drop one boundary entry to prove the harness catches it")

    p = sub.add_parser("partition", help="partition a complex's 1-skeleton")
    p.add_argument("input", help=".cplx file")
    p.add_argument("--parts", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="partition file (stdout if omitted)")

    s = sub.add_parser("stats", help="cover statistics for a partition")
    s.add_argument("input", help=".cplx file")
    s.add_argument("--parts", type=int, help="partition count (default 4)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--partition-file", help="use this partition instead")

    h = sub.add_parser("homology", help="Betti numbers of a .cplx complex")
    h.add_argument("input", help=".cplx file")
    h.add_argument("--algorithm", default="serial",
                   choices=["serial", "mv", "heuristic"])
    h.add_argument("--threads", type=int, default=1)
    h.add_argument("--parts", type=int, help="partition count (defaults to --threads)")
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--partition-file", help="use this partition instead")
    h.add_argument("--dump-blowup", help="mv only: write blowup cells to this file")

    b = sub.add_parser("bench", help="timing benchmark over inputs and thread counts")
    b.add_argument("inputs", nargs="+", help=".cplx files")
    b.add_argument("--threads-list", default="1,2,4",
                   help="comma-separated worker counts")
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--algorithms", default="serial,mv,heuristic")
    b.add_argument("--csv", required=True, help="output CSV path")
    return ap


def _cmd_generate(args) -> int:
    kind = args.kind
    if kind == "sphere":
        if args.n is None:
            raise UsageError("--kind sphere needs --n")
        save_points(sphere_sample(args.n, args.sphere_dim, args.seed), args.out)
        return 0
    if kind == "path":
        if args.n is None:
            raise UsageError("--kind path needs --n")
        K = path_complex(args.n)
    elif kind == "simplex":
        if args.n is None:
            raise UsageError("--kind simplex needs --n")
        K = full_simplex_complex(args.n)
    elif kind == "multiblob":
        if args.n is None:
            raise UsageError("--kind multiblob needs --n (blob vertex count)")
        K = multiblob(args.copies, args.n, args.groups)
    elif kind == "rips":
        if args.epsilon is None:
            raise UsageError("--kind rips needs --epsilon")
        if args.points:
            cloud = load_points(args.points)
        elif args.n is not None:
            cloud = sphere_sample(args.n, args.sphere_dim, args.seed)
        else:
            raise UsageError("--kind rips needs --points or --n")
        K = vietoris_rips(cloud, args.epsilon, args.max_dim)
    elif kind == "flag":
        if args.n is None:
            raise UsageError("--kind flag needs --n")
        K = flag_complex(erdos_renyi(args.n, args.prob, args.seed), args.max_dim)
    else:  # unreachable given argparse choices
        raise UsageError(f"unknown kind {kind}")
    save_complex(K, args.out)
    return 0


def _cmd_verify(args) -> int:
    outcome = verify_agreement(
        args.trials, args.max_vertices, args.seed, inject_fault=args.inject_fault
    )
    if outcome.ok:
        print(f"ok: {outcome.checked} instances agree across all algorithms")
        return 0
    print(outcome.counterexample)
    return 1


def _load_partition_for(args, K):
    if getattr(args, "partition_file", None):
        P = load_partition(args.partition_file, expected_n=K.n_vertices)
        if args.parts is not None and args.parts != P.p:
            raise UsageError(
                f"--parts {args.parts} contradicts partition file with {P.p} parts"
            )
        return P
    return None


def _cmd_partition(args) -> int:
    K = load_complex(args.input)
    P = partition_graph(one_skeleton_graph(K), args.parts, args.seed)
    if args.out:
        save_partition(P, args.out)
    else:
        sys.stdout.write("\n".join(str(int(x)) for x in P.part) + "\n")
    return 0


def _cmd_stats(args) -> int:
    K = load_complex(args.input)
    P = _load_partition_for(args, K)
    if P is None:
        parts = args.parts if args.parts is not None else 4
        P = partition_graph(one_skeleton_graph(K), parts, args.seed)
    cover = close_cover(open_cover(K, P))
    st = cover_stats(cover, P)
    print(f"graph_balance_ratio={st.graph_balance_ratio:.6g}")
    print(f"cover_balance_ratio={st.cover_balance_ratio:.6g}")
    print(f"edgecut={st.edgecut}")
    print(f"blowup_factor={float(st.predicted_blowup):.6g}")
    if not st.triple_free:
        print("warning: triple intersection present; blowup_factor is a lower bound",
              file=sys.stderr)
    return 0


def _cmd_homology(args) -> int:
    K = load_complex(args.input)
    parts = args.parts if args.parts is not None else args.threads
    P = _load_partition_for(args, K)
    if args.dump_blowup and args.algorithm != "mv":
        raise UsageError("--dump-blowup only applies to --algorithm mv")
    if args.algorithm == "serial":
        report = serial_homology(K)
    elif args.algorithm == "mv":
        report = multicore_homology(
            K, workers=args.threads, parts=parts, seed=args.seed, partition=P
        )
        if args.dump_blowup:
            dump_blowup(report.blowup, args.dump_blowup)
    else:
        report = heuristic_mh(
            K, workers=args.threads, parts=parts, seed=args.seed, partition=P
        )
    print(str(report.betti))
    return 0


def _cmd_bench(args) -> int:
    try:
        threads = [int(t) for t in args.threads_list.split(",") if t]
        algorithms = [a for a in args.algorithms.split(",") if a]
    except ValueError:
        raise UsageError("--threads-list wants comma-separated integers") from None
    for a in algorithms:
        if a not in ("serial", "mv", "heuristic"):
            raise UsageError(f"unknown algorithm {a!r}")
    inputs = [(path, load_complex(path)) for path in args.inputs]
    rows = run_benchmark(
        inputs, threads, trials=args.trials, seed=args.seed, algorithms=algorithms
    )
    write_csv(rows, args.csv)
    print(f"wrote {len(rows)} rows to {args.csv}")
    return 0


class UsageError(Exception):
    pass


_HANDLERS = {
    "generate": _cmd_generate,
    "verify": _cmd_verify,
    "partition": _cmd_partition,
    "stats": _cmd_stats,
    "homology": _cmd_homology,
    "bench": _cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BenchmarkError as exc:
        print(f"benchmark aborted: {exc}", file=sys.stderr)
        return 1
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
