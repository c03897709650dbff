"""Command-line interface.

Subcommands: enumerate, count, treewidth, bench er-sweep, bench tw-curve.
Occurrences go to stdout (one line of target vertex ids per occurrence, in
pattern vertex-id order, then a final ``count <k>``); the run report goes to
stderr as key=value lines.  Exit codes: 0 success, 1 usage or input error,
2 runtime abort (memory budget, corrupt archive).
"""

from __future__ import annotations

import argparse
import math
import sys

from .bench import SweepConfig, run_sweep, treewidth_curve
from .engine import SolveOptions, solve
from .graph import GraphParseError, load_graph
from .reconstruct import ALL_MAPPINGS, DISTINCT_VERTEX_SETS, ArchiveCorruption
from .treedecomp import decomposition_from_ordering, exact_treewidth, make_nice


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="subiso", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("enumerate", "print every occurrence found"),
                            ("count", "print only the occurrence count")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--pattern", required=True, help="pattern graph file")
        p.add_argument("--target", required=True, help="target graph file")
        p.add_argument("--epsilon", type=float, default=math.exp(-1),
                       help="miss probability per occurrence (default 1/e)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-results", type=int, default=100_000)
        p.add_argument("--iterations", type=int, default=None,
                       help="fixed iteration count (overrides --epsilon)")
        p.add_argument("--distinct-vertex-sets", action="store_true",
                       help="deduplicate occurrences by vertex set")
        p.add_argument("--timeout-secs", type=float, default=600.0)
        p.add_argument("--masks", action="store_true",
                       help="read the target in the extended format with "
                            "per-vertex allowed pattern vertices")

    p = sub.add_parser("treewidth", help="width and nice decomposition of a graph")
    p.add_argument("--graph", required=True, help="plain graph file")

    bench = sub.add_parser("bench", help="random-graph benchmarks")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True)

    p = bench_sub.add_parser("er-sweep", help="G(n,p) x G(n,p) timing sweep")
    p.add_argument("--target-n", type=int, default=60)
    p.add_argument("--pattern-n", type=int, default=8)
    p.add_argument("--grid-start", type=float, default=0.0)
    p.add_argument("--grid-stop", type=float, default=1.0)
    p.add_argument("--grid-step", type=float, default=0.1)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--cell-timeout-secs", type=float, default=20.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="CSV output path")

    p = bench_sub.add_parser("tw-curve", help="mean treewidth vs edge probability")
    p.add_argument("--pattern-n", type=int, default=10)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="CSV output path")

    return parser


def _run_solve(args, out, err) -> int:
    pattern, _ = load_graph(args.pattern, "plain")
    target_kind = "extended" if args.masks else "plain"
    target, mask = load_graph(args.target, target_kind)
    opts = SolveOptions(
        epsilon=args.epsilon,
        max_results=args.max_results,
        mode=DISTINCT_VERTEX_SETS if args.distinct_vertex_sets else ALL_MAPPINGS,
        seed=args.seed,
        iterations_override=args.iterations,
        timeout_secs=args.timeout_secs,
        count_only=args.command == "count",
    )
    occurrences, report = solve(target, pattern, mask, opts)
    if not opts.count_only:
        for phi in occurrences:
            print(" ".join(str(x) for x in phi), file=out)
    print(f"count {len(occurrences)}", file=out)
    for line in report.lines():
        print(line, file=err)
    return 2 if report.memory_abort else 0


def _run_treewidth(args, out) -> int:
    graph, _ = load_graph(args.graph, "plain")
    width, ordering = exact_treewidth(graph)
    ntd = make_nice(decomposition_from_ordering(graph, ordering))
    print(f"width {width}", file=out)
    for nid, node in enumerate(ntd.nodes):
        vertices = " ".join(str(v) for v in node.bag)
        print(f"bag {nid} kind {node.kind.capitalize()}: {vertices}".rstrip(),
              file=out)
    return 0


def _run_bench(args, err) -> int:
    if args.bench_command == "er-sweep":
        cfg = SweepConfig(
            target_n=args.target_n, pattern_n=args.pattern_n,
            grid_start=args.grid_start, grid_stop=args.grid_stop,
            grid_step=args.grid_step, iterations=args.iterations,
            cell_timeout_secs=args.cell_timeout_secs, seed=args.seed,
        )
        run_sweep(cfg, csv_path=args.output, progress=err)
    else:
        treewidth_curve(pattern_n=args.pattern_n, step=args.step,
                        samples=args.samples, seed=args.seed,
                        csv_path=args.output)
    return 0


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=err)
        return 1
    try:
        if args.command in ("enumerate", "count"):
            return _run_solve(args, out, err)
        if args.command == "treewidth":
            return _run_treewidth(args, out)
        return _run_bench(args, err)
    except (OSError, GraphParseError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    except (ArchiveCorruption, RuntimeError) as exc:
        print(f"fatal: {exc}", file=err)
        return 2


def console_main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(main())
