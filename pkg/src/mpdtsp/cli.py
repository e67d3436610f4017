"""Command-line front end.

Verbs: inspect, generate, solve, exact, validate, bench, compare.
Exit codes: 0 success, 1 domain infeasibility, 2 usage error, 3 internal
invariant failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bench, files, tsplib
from .cheapest_insertion import cih_best, cih_from
from .construction import MultiStartError, MultiStartResult
from .exact import BRUTE_FORCE_PAIR_LIMIT, HELD_KARP_PAIR_LIMIT, brute_force, held_karp
from .generate import Direction, GenerationSpec, centroid, generate, rank_by_centroid
from .model import InfeasibleInstanceError, Instance, tour_cost, validate
from .nearest_neighbor import nnh_best, nnh_from
from .tsplib import MetricMode, TsplibParseError

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

_METRIC_FLAGS = {"rounded": MetricMode.ROUNDED, "exact": MetricMode.EXACT}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpdtsp",
        description="Construction heuristics and exact solving for capacitated "
        "one-to-one pickup-and-delivery tours.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("inspect", help="print point-cloud stats for a TSPLIB file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_inspect)

    p = sub.add_parser("generate", help="derive an instance from a TSPLIB file")
    p.add_argument("file")
    p.add_argument("--direction", required=True,
                   choices=[d.value for d in Direction])
    p.add_argument("--capacity", required=True, type=int, metavar="ITEMS")
    p.add_argument("--unit-load", type=float, default=1.0)
    p.add_argument("--metric", choices=sorted(_METRIC_FLAGS), default="exact")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("solve", help="run construction heuristics on an instance file")
    p.add_argument("instance")
    p.add_argument("--heuristic", choices=["nnh", "cih", "both"], default="both")
    p.add_argument("--init", default="all",
                   help="'all', 'depot', or a node id (default: all)")
    p.add_argument("--metric", choices=sorted(_METRIC_FLAGS),
                   help="override the metric recorded in the instance file")
    p.add_argument("--table", help="write the per-start cost table as CSV")
    p.add_argument("--out", help="write the best tour (one node id per line)")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("exact", help="solve a small instance to optimality")
    p.add_argument("instance")
    p.add_argument("--pair-limit", type=int, default=HELD_KARP_PAIR_LIMIT)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("validate", help="check a tour file against an instance")
    p.add_argument("instance")
    p.add_argument("tour")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("bench", help="sweep a corpus directory with both heuristics")
    p.add_argument("--config", help="key=value file with any of the flags below")
    p.add_argument("--corpus", help="directory of TSPLIB EUC_2D files")
    p.add_argument("--directions", help="comma list of precedence directions")
    p.add_argument("--capacities", help="comma list of capacities, e.g. 2,4,6,8,10")
    p.add_argument("--metric", choices=sorted(_METRIC_FLAGS))
    p.add_argument("--init-policy", choices=[bench.InitPolicy.ALL, bench.InitPolicy.DEPOT])
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--csv", help="write result rows here")
    p.add_argument("--svg", help="write summary charts here")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("compare", help="heuristics vs the exact optimum on one instance")
    p.add_argument("instance")
    p.add_argument("--pair-limit", type=int, default=HELD_KARP_PAIR_LIMIT)
    p.set_defaults(func=_cmd_compare)

    return parser


def _load_instance(args) -> Instance:
    instance = files.read_instance(args.instance)
    metric = getattr(args, "metric", None)
    if metric:
        instance = instance.with_metric(_METRIC_FLAGS[metric])
    return instance


def _cmd_inspect(args) -> int:
    cloud = tsplib.parse_file(args.file)
    xy = cloud.coords_array()
    cx, cy = centroid(cloud)
    depot_index = rank_by_centroid(cloud)[0]
    print(f"name: {cloud.name}")
    print(f"points: {len(cloud)}")
    print(f"x range: [{xy[:, 0].min():g}, {xy[:, 0].max():g}]")
    print(f"y range: [{xy[:, 1].min():g}, {xy[:, 1].max():g}]")
    print(f"centroid: ({cx:g}, {cy:g})")
    print(f"centroid-nearest point (depot designate): file index {depot_index}")
    print(f"derivable pairs: {(len(cloud) - 1) // 2}")
    return EXIT_OK


def _cmd_generate(args) -> int:
    cloud = tsplib.parse_file(args.file)
    spec = GenerationSpec(Direction(args.direction), args.capacity, args.unit_load)
    instance = generate(cloud, spec, _METRIC_FLAGS[args.metric])
    files.write_instance(instance, args.out)
    files.write_sidecar(instance.meta, str(args.out) + ".meta")
    dropped = instance.meta.get("dropped_file_index") or "none"
    print(
        f"{instance.name}: {instance.n_pairs} pairs, capacity {instance.capacity:g}, "
        f"dropped file index: {dropped}"
    )
    print(f"wrote {args.out} and {args.out}.meta")
    return EXIT_OK


def _parse_inits(instance: Instance, flag: str):
    if flag == "all":
        return None
    if flag == "depot":
        return [0]
    try:
        node = int(flag)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--init must be 'all', 'depot' or a node id, got {flag!r}"
        ) from None
    return [instance.normalize_node(node)]


def _print_result(label: str, result: MultiStartResult, table: bool = False) -> None:
    tour = result.best_tour
    print(f"{label} best cost: {tour.cost!r} (start {result.best_init}, "
          f"{len(result.costs)} starts ok, {len(result.dead_ends)} dead ends)")
    print(f"{label} tour: {' '.join(str(v) for v in tour.sequence)}")
    if table:
        print(f"{label} per-start costs:")
        for init in sorted(result.costs):
            marker = " *" if init == result.best_init else ""
            print(f"  {init:>4d}  {result.costs[init]:.6f}{marker}")
        for init in result.dead_ends:
            print(f"  {init:>4d}  dead-end")


def _write_table(results: dict[str, MultiStartResult], path: str) -> None:
    lines = ["heuristic,init,cost"]
    for label, result in sorted(results.items()):
        for init in sorted(result.costs):
            lines.append(f"{label},{init},{result.costs[init]!r}")
        for init in result.dead_ends:
            lines.append(f"{label},{init},dead-end")
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def _cmd_solve(args) -> int:
    instance = _load_instance(args)
    inits = _parse_inits(instance, args.init)
    solvers = {"nnh": [("NNH", nnh_best)], "cih": [("CIH", cih_best)],
               "both": [("NNH", nnh_best), ("CIH", cih_best)]}[args.heuristic]
    results: dict[str, MultiStartResult] = {}
    for label, solver in solvers:
        results[label] = solver(instance, inits)
        _print_result(label, results[label], table=True)
    if args.table:
        _write_table(results, args.table)
        print(f"wrote per-start table to {args.table}")
    if args.out:
        best = min(results.values(), key=lambda r: (r.best_cost, r.best_init))
        files.write_tour(best.best_tour, args.out)
        print(f"wrote best tour to {args.out}")
    return EXIT_OK


def _cmd_exact(args) -> int:
    instance = _load_instance(args)
    tour = held_karp(instance, pair_limit=args.pair_limit)
    if tour is None:
        print("infeasible: no tour satisfies the constraint system")
        return EXIT_INFEASIBLE
    print(f"optimal cost: {tour.cost!r}")
    print(f"optimal tour: {' '.join(str(v) for v in tour.sequence)}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    instance = _load_instance(args)
    sequence = files.read_tour_sequence(args.tour)
    report = validate(instance, sequence)
    print(report)
    if report.feasible:
        print(f"cost: {tour_cost(instance, sequence)!r}")
        return EXIT_OK
    return EXIT_INFEASIBLE


def _cmd_bench(args) -> int:
    settings: dict[str, str] = {}
    if args.config:
        settings.update(files.read_key_values(args.config))
    # CLI flags override the config file
    if args.corpus:
        settings["corpus"] = args.corpus
    if args.directions:
        settings["directions"] = args.directions
    if args.capacities:
        settings["capacities"] = args.capacities
    if args.metric:
        settings["metric"] = args.metric
    if args.init_policy:
        settings["init_policy"] = args.init_policy
    if args.max_nodes is not None:
        settings["max_nodes"] = str(args.max_nodes)

    if "corpus" not in settings:
        raise ValueError("bench needs --corpus (or corpus= in the config file)")
    config = bench.ExperimentConfig(
        corpus_dir=Path(settings["corpus"]),
        directions=tuple(
            Direction(v.strip())
            for v in settings.get("directions", "pickups-central,deliveries-central").split(",")
        ),
        capacities=tuple(
            int(v) for v in settings.get("capacities", "2,4,6,8,10").split(",")
        ),
        metric=_METRIC_FLAGS[settings.get("metric", "exact")],
        init_policy=settings.get("init_policy", bench.InitPolicy.ALL),
        max_nodes=int(settings["max_nodes"]) if settings.get("max_nodes") else None,
    )
    rows = bench.run_corpus(config)
    summary = bench.summarize(rows)
    print(f"rows: {len(rows)}")
    for direction, ds in sorted(summary.directions.items()):
        print(f"{direction}: NNH wins {ds.nnh_wins}/{ds.pair_count} "
              f"({ds.win_fraction:.1%})")
    print(f"overall: NNH wins {summary.overall_win_fraction:.1%} "
          f"of {summary.overall_pairs} configurations")
    print(f"max cost reduction over CIH: {summary.max_cost_reduction:.1%}")
    if args.csv:
        bench.emit_csv(rows, args.csv)
        print(f"wrote {args.csv}")
    if args.svg:
        bench.emit_svg_histogram(summary, args.svg)
        print(f"wrote {args.svg}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    instance = _load_instance(args)
    nnh = nnh_best(instance)
    cih = cih_best(instance)
    _print_result("NNH", nnh)
    _print_result("CIH", cih)
    if instance.n_pairs > args.pair_limit:
        print(f"exact: skipped ({instance.n_pairs} pairs exceeds limit {args.pair_limit})")
        return EXIT_OK
    optimum = held_karp(instance, pair_limit=args.pair_limit)
    if optimum is None:
        print("exact: infeasible")
        return EXIT_INFEASIBLE
    print(f"exact optimal cost (depot-rooted): {optimum.cost!r}")
    for label, construct in (("NNH", nnh_from), ("CIH", cih_from)):
        depot_tour = construct(instance, 0)
        gap = (depot_tour.cost - optimum.cost) / optimum.cost if optimum.cost else 0.0
        print(f"{label} depot-start cost {depot_tour.cost!r}, gap to optimum: {gap:.2%}")
    for label, result in (("NNH", nnh), ("CIH", cih)):
        # any-start tours carry different load profiles and may legitimately
        # undercut the depot-rooted optimum
        print(f"{label} any-start best: {result.best_cost!r} "
              "(not bounded by the depot-rooted optimum)")
    if instance.n_pairs <= BRUTE_FORCE_PAIR_LIMIT:
        reference = brute_force(instance)
        agree = reference is not None and abs(reference.cost - optimum.cost) <= 1e-9
        print(f"enumeration cross-check: {'ok' if agree else 'MISMATCH'}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the usage message
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (InfeasibleInstanceError, MultiStartError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (TsplibParseError, ValueError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
