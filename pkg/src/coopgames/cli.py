"""Command-line front end.

Subcommands: value, check, restrict, diagnose, counterexample, fuzz. All
interchange is JSON with exact "p/q" rationals; --format table renders a
human-oriented view and --decimal appends approximate decimals without ever
replacing the exact values.

Exit codes are a stable contract: 0 property holds / command succeeded,
1 property violated, 2 parse error, 3 dimension mismatch, 4 internal
disagreement, 5 precondition violation.
"""

import argparse
import os
import sys
import time

from . import serialize
from .convexity import (
    check_average_convexity,
    check_weighted_average_convexity,
    core_contains,
    weak_superadditivity_holds,
)
from .counterexamples import (
    fourpath_bundle,
    noncomplete_cycle_bundle,
    search_counterexample,
    threepan_bundle,
    verify_bundle,
)
from .games import is_convex, is_superadditive
from .graphs import restricted_game
from .serialize import ParseError
from .shapley import (
    ORDER_ENUM_LIMIT,
    weighted_shapley_dividends,
    weighted_shapley_marginals,
    weighted_shapley_orders,
    weighted_shapley_recursive,
)
from .structure import hierarchy_characterization, is_priority_decreasing_tree, necessary_conditions, singleton_characterization
from .weights import uniform_system

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_PARSE = 2
EXIT_MISMATCH = 3
EXIT_INTERNAL = 4
EXIT_PRECONDITION = 5

DEFAULT_SEED = 1729

METHODS = {
    "dividends": weighted_shapley_dividends,
    "orders": weighted_shapley_orders,
    "recursive": weighted_shapley_recursive,
    "gamma": weighted_shapley_marginals,
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _worker_cap()  # validated for the contract; computations are serial
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


def _worker_cap() -> int:
    raw = os.environ.get("COOP_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        raise CliError(EXIT_PRECONDITION, f"COOP_THREADS must be a positive integer, got {raw!r}")
    if cap < 1:
        raise CliError(EXIT_PRECONDITION, "COOP_THREADS must be at least 1")
    return cap


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coopgames", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("value", help="compute (weighted) Shapley or Myerson values")
    p.add_argument("--game", required=True)
    p.add_argument("--weights")
    p.add_argument("--graph")
    p.add_argument("--method", choices=[*METHODS, "all"], default="dividends")
    _common_flags(p)
    p.set_defaults(handler=cmd_value)

    p = sub.add_parser("check", help="run a convexity, superadditivity, or core check")
    p.add_argument("--game", required=True)
    p.add_argument("--weights")
    p.add_argument("--what", required=True, choices=["wac", "avg", "convex", "superadd", "weaksuper", "core"])
    p.add_argument("--alloc", help="allocation file, required for --what core")
    p.add_argument("--all-violations", action="store_true")
    _common_flags(p)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("restrict", help="emit the communication game as a game file")
    p.add_argument("--game", required=True)
    p.add_argument("--graph", required=True)
    _common_flags(p)
    p.set_defaults(handler=cmd_restrict)

    p = sub.add_parser("diagnose", help="structural preservation diagnosis of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--weights")
    _common_flags(p)
    p.set_defaults(handler=cmd_diagnose)

    p = sub.add_parser("counterexample", help="emit a verified non-preservation bundle")
    p.add_argument("--family", required=True, choices=["cycle", "threepan", "fourpath"])
    p.add_argument("--weights")
    p.add_argument("--cycle-nodes", help="comma-separated 1-based nodes, family=cycle (default: all players in order)")
    p.add_argument("--chords", help="semicolon-separated chords like 1-3;2-5, family=cycle")
    p.add_argument("--lstar", type=int, help="1-based pivot node on the cycle")
    _common_flags(p)
    p.set_defaults(handler=cmd_counterexample)

    p = sub.add_parser("fuzz", help="randomized preservation falsification")
    p.add_argument("--graph", required=True)
    p.add_argument("--weights")
    p.add_argument("--trials", type=int, default=200)
    _common_flags(p)
    p.set_defaults(handler=cmd_fuzz)

    return parser


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON result here instead of stdout")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--decimal", action="store_true", help="append approximate decimals to the exact output")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _load_game(path):
    return serialize.game_from_dict(serialize.load_json(path))


def _load_graph(path):
    return serialize.graph_from_dict(serialize.load_json(path))


def _load_ws(path, n):
    if path is None:
        return uniform_system(n)
    ws = serialize.weights_from_dict(serialize.load_json(path))
    if ws.n != n:
        raise CliError(EXIT_MISMATCH, f"weight system has {ws.n} players, expected {n}")
    return ws


def _emit(args, payload: dict, table_lines) -> None:
    if args.format == "table":
        text = "\n".join(table_lines)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    else:
        text = serialize.dump_json(payload, args.out)
        if not args.out:
            print(text)


def _alloc_payload(alloc, decimal: bool):
    out = {"exact": serialize.allocation_to_list(alloc)}
    if decimal:
        out["decimal"] = [float(x) for x in alloc]
    return out


def cmd_value(args) -> int:
    game = _load_game(args.game)
    ws = _load_ws(args.weights, game.n)
    if args.graph:
        graph = _load_graph(args.graph)
        if graph.n != game.n:
            raise CliError(EXIT_MISMATCH, f"graph has {graph.n} nodes, game has {game.n} players")
        game = restricted_game(game, graph)
    if args.method == "orders" and game.n > ORDER_ENUM_LIMIT:
        raise CliError(EXIT_PRECONDITION, f"order enumeration needs n <= {ORDER_ENUM_LIMIT}")
    if args.method == "all":
        methods = dict(METHODS)
        if game.n > ORDER_ENUM_LIMIT:
            del methods["orders"]  # enumeration infeasible; the other three still cross-check
        allocations = {name: fn(game, ws) for name, fn in methods.items()}
        reference = next(iter(allocations.values()))
        agree = all(alloc == reference for alloc in allocations.values())
        payload = {
            "myerson": bool(args.graph),
            "allocations": {name: _alloc_payload(a, args.decimal) for name, a in allocations.items()},
            "agree": agree,
        }
        lines = [f"{name:10s} " + " ".join(map(str, a)) for name, a in allocations.items()]
        lines.append(f"agree: {agree}")
        _emit(args, payload, lines)
        return EXIT_OK if agree else EXIT_INTERNAL
    alloc = METHODS[args.method](game, ws)
    payload = {"myerson": bool(args.graph), "method": args.method, "allocation": _alloc_payload(alloc, args.decimal)}
    _emit(args, payload, [" ".join(map(str, alloc))])
    return EXIT_OK


def cmd_check(args) -> int:
    game = _load_game(args.game)
    ws = _load_ws(args.weights, game.n)
    collect = args.all_violations
    if args.what == "core":
        if not args.alloc:
            raise CliError(EXIT_PRECONDITION, "--what core needs --alloc")
        alloc = serialize.allocation_from_list(serialize.load_json(args.alloc))
        if len(alloc) != game.n:
            raise CliError(EXIT_MISMATCH, f"allocation has {len(alloc)} entries, game has {game.n} players")
        ok = core_contains(game, alloc)
        payload = {"what": "core", "holds": ok}
        _emit(args, payload, [f"core membership: {ok}"])
        return EXIT_OK if ok else EXIT_VIOLATED
    if args.what == "wac":
        report = check_weighted_average_convexity(game, ws, collect_all=collect)
        payload = {"what": "wac", **serialize.report_to_dict(report, args.decimal)}
    elif args.what == "avg":
        report = check_average_convexity(game, collect_all=collect)
        payload = {"what": "avg", **serialize.report_to_dict(report, args.decimal)}
    elif args.what == "convex":
        ok = is_convex(game)
        payload = {"what": "convex", "holds": ok}
        _emit(args, payload, [f"convex: {ok}"])
        return EXIT_OK if ok else EXIT_VIOLATED
    elif args.what == "superadd":
        ok = is_superadditive(game)
        payload = {"what": "superadd", "holds": ok}
        _emit(args, payload, [f"superadditive: {ok}"])
        return EXIT_OK if ok else EXIT_VIOLATED
    else:  # weaksuper
        try:
            report = weak_superadditivity_holds(game, ws, collect_all=collect)
        except ValueError as exc:
            raise CliError(EXIT_PRECONDITION, str(exc))
        payload = {"what": "weaksuper", **serialize.triple_report_to_dict(report)}
        _emit(args, payload, [f"weak superadditivity: {report.holds}"])
        return EXIT_OK if report.holds else EXIT_VIOLATED
    _emit(args, payload, [f"{args.what}: {report.holds}"] + [
        f"  violation S={v['s']} T={v['t']} lhs={v['lhs']} rhs={v['rhs']}" for v in payload["violations"]
    ])
    return EXIT_OK if report.holds else EXIT_VIOLATED


def cmd_restrict(args) -> int:
    game = _load_game(args.game)
    graph = _load_graph(args.graph)
    if graph.n != game.n:
        raise CliError(EXIT_MISMATCH, f"graph has {graph.n} nodes, game has {game.n} players")
    payload = serialize.game_to_dict(restricted_game(game, graph))
    _emit(args, payload, [serialize.dump_json(payload)])
    return EXIT_OK


def cmd_diagnose(args) -> int:
    graph = _load_graph(args.graph)
    ws = _load_ws(args.weights, graph.n)
    diag = necessary_conditions(graph, ws)
    verdict = "unknown"
    chain_payload = None
    if not diag.all_ok:
        verdict = "not_preserved"
    elif ws.m == 1:
        verdict = "preserved" if singleton_characterization(graph) else "not_preserved"
    elif is_priority_decreasing_tree(graph, ws) is not None:
        ok, chain = hierarchy_characterization(graph, ws)
        verdict = "preserved" if ok else "not_preserved"
        if ok:
            chain_payload = serialize.chain_to_list(chain)
    payload = {**serialize.diagnosis_to_dict(diag), "verdict": verdict}
    if chain_payload is not None:
        payload["star_chain"] = chain_payload
    lines = [f"{k}: {'ok' if payload[k]['ok'] else 'FAIL'}" for k in ("cycle_rule", "layer_shapes", "uplink_rule", "component_links")]
    lines.append(f"verdict: {verdict}")
    _emit(args, payload, lines)
    return EXIT_VIOLATED if verdict == "not_preserved" else EXIT_OK


def cmd_counterexample(args) -> int:
    try:
        if args.family == "cycle":
            ws = _required_ws(args, default_n=4)
            nodes = _parse_nodes(args.cycle_nodes, ws.n) if args.cycle_nodes else list(range(ws.n))
            chords = _parse_chords(args.chords, ws.n) if args.chords else []
            lstar = args.lstar - 1 if args.lstar is not None else _default_lstar(nodes, ws)
            bundle = noncomplete_cycle_bundle(nodes, chords, lstar, ws)
        elif args.family == "threepan":
            ws = _required_ws(args, default_n=4)
            bundle = threepan_bundle(ws)
        else:
            ws = _required_ws(args, default_n=4)
            bundle = fourpath_bundle(ws)
    except ValueError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc))
    result = verify_bundle(bundle)
    if not result:
        raise CliError(EXIT_INTERNAL, f"constructed bundle failed verification: {result.failure}")
    payload = serialize.bundle_to_dict(bundle)
    payload["verified"] = True
    payload["violation"] = {"lhs": serialize.format_rational(result.lhs), "rhs": serialize.format_rational(result.rhs)}
    _emit(args, payload, [serialize.dump_json(payload)])
    return EXIT_OK


def _required_ws(args, default_n: int):
    if args.weights:
        return serialize.weights_from_dict(serialize.load_json(args.weights))
    return uniform_system(default_n)


def _parse_nodes(raw: str, n: int) -> list[int]:
    try:
        nodes = [int(tok) - 1 for tok in raw.split(",")]
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"bad node list {raw!r}")
    if any(not 0 <= v < n for v in nodes):
        raise CliError(EXIT_MISMATCH, f"cycle nodes out of range 1..{n}")
    return nodes


def _parse_chords(raw: str, n: int) -> list[tuple[int, int]]:
    chords = []
    for tok in raw.split(";"):
        parts = tok.split("-")
        if len(parts) != 2:
            raise CliError(EXIT_PARSE, f"bad chord {tok!r}, expected like 1-3")
        try:
            a, b = int(parts[0]) - 1, int(parts[1]) - 1
        except ValueError:
            raise CliError(EXIT_PARSE, f"bad chord {tok!r}")
        if not (0 <= a < n and 0 <= b < n):
            raise CliError(EXIT_MISMATCH, f"chord {tok!r} out of range 1..{n}")
        chords.append((a, b))
    return chords


def _default_lstar(nodes, ws) -> int:
    cyc = 0
    for v in nodes:
        cyc |= 1 << v
    top = ws.top_set(cyc)
    for v in nodes:
        if top & (1 << v):
            return v
    raise CliError(EXIT_INTERNAL, "a cycle always has a top-priority node")


def cmd_fuzz(args) -> int:
    graph = _load_graph(args.graph)
    ws = _load_ws(args.weights, graph.n)
    start = time.monotonic()
    bundle = search_counterexample(graph, ws, budget=args.trials, seed=args.seed)
    elapsed = time.monotonic() - start
    payload = {"trials": args.trials, "seed": args.seed, "elapsed_seconds": round(elapsed, 3), "found": bundle is not None}
    lines = [f"trials: {args.trials}", f"elapsed: {elapsed:.3f}s", f"violation found: {bundle is not None}"]
    if bundle is not None:
        payload["bundle"] = serialize.bundle_to_dict(bundle)
    _emit(args, payload, lines)
    return EXIT_VIOLATED if bundle is not None else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
