"""JSON interchange for games, weight systems, graphs, and reports.

Players are 1-based in every file format; rationals travel as "p/q" or plain
integer strings, never as floats. Parsing is strict so malformed inputs fail
loudly instead of rounding silently.
"""

import json
from fractions import Fraction

from .convexity import ConvexityReport, TripleReport
from .counterexamples import CounterexampleBundle
from .games import TuGame, make_game
from .graphs import Graph, graph_from_edges
from .masks import members
from .structure import ChainStar, StructureDiagnosis
from .weights import WeightSystem, simple_system


class ParseError(ValueError):
    pass


def parse_rational(raw) -> Fraction:
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        text = raw.strip()
        if "." in text or "e" in text.lower():
            raise ParseError(f"rationals must be 'p/q' or integer strings, got {raw!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse rational {raw!r}") from exc
    raise ParseError(f"rationals must be 'p/q' or integer strings, got {type(raw).__name__}")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def players_to_mask(players, n: int) -> int:
    mask = 0
    for p in players:
        if not isinstance(p, int) or not 1 <= p <= n:
            raise ParseError(f"player {p!r} out of range 1..{n}")
        mask |= 1 << (p - 1)
    return mask


def mask_to_players(mask: int) -> list[int]:
    return [i + 1 for i in members(mask)]


def _coalition_key_to_mask(key: str, n: int) -> int:
    key = key.strip()
    if not key:
        return 0
    try:
        players = [int(tok) for tok in key.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad coalition key {key!r}") from exc
    return players_to_mask(players, n)


def game_to_dict(v: TuGame) -> dict:
    values = {}
    for mask in range(1, 1 << v.n):
        if v.values[mask] != 0:
            key = ",".join(str(p) for p in mask_to_players(mask))
            values[key] = format_rational(v.values[mask])
    return {"n": v.n, "values": values}


def game_from_dict(data: dict) -> TuGame:
    try:
        n = data["n"]
        raw_values = data.get("values", {})
    except (TypeError, KeyError) as exc:
        raise ParseError("game files need 'n' and 'values'") from exc
    if not isinstance(n, int):
        raise ParseError("'n' must be an integer")
    entries = {}
    for key, raw in raw_values.items():
        entries[_coalition_key_to_mask(key, n)] = parse_rational(raw)
    try:
        return make_game(n, entries)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def weights_to_dict(ws: WeightSystem) -> dict:
    return {
        "weights": [format_rational(w) for w in ws.weights],
        "partition": [mask_to_players(block) for block in ws.partition],
    }


def weights_from_dict(data: dict) -> WeightSystem:
    try:
        raw_weights = data["weights"]
    except (TypeError, KeyError) as exc:
        raise ParseError("weight files need a 'weights' list") from exc
    weights = [parse_rational(w) for w in raw_weights]
    n = len(weights)
    raw_partition = data.get("partition")
    try:
        if raw_partition is None:
            return simple_system(weights)
        partition = tuple(players_to_mask(block, n) for block in raw_partition)
        return WeightSystem(n, tuple(weights), partition)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [[a + 1, b + 1] for a, b in sorted(g.edges)]}


def graph_from_dict(data: dict) -> Graph:
    try:
        n = data["n"]
        raw_edges = data.get("edges", [])
    except (TypeError, KeyError) as exc:
        raise ParseError("graph files need 'n' and 'edges'") from exc
    if not isinstance(n, int):
        raise ParseError("'n' must be an integer")
    edges = []
    for pair in raw_edges:
        if len(pair) != 2:
            raise ParseError(f"edges must be pairs, got {pair!r}")
        a, b = pair
        if not (isinstance(a, int) and isinstance(b, int) and 1 <= a <= n and 1 <= b <= n and a != b):
            raise ParseError(f"bad edge {pair!r} for {n} nodes")
        edges.append((a - 1, b - 1))
    try:
        return graph_from_edges(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def allocation_to_list(allocation) -> list[str]:
    return [format_rational(x) for x in allocation]


def allocation_from_list(data) -> tuple[Fraction, ...]:
    if not isinstance(data, list):
        raise ParseError("allocations are JSON arrays of rational strings")
    return tuple(parse_rational(x) for x in data)


def report_to_dict(report: ConvexityReport, decimal: bool = False) -> dict:
    return {
        "holds": report.holds,
        "violations": [
            {
                "s": mask_to_players(v.s),
                "t": mask_to_players(v.t),
                "lhs": format_rational(v.lhs),
                "rhs": format_rational(v.rhs),
                **({"lhs_decimal": float(v.lhs), "rhs_decimal": float(v.rhs)} if decimal else {}),
            }
            for v in report.violations
        ],
    }


def triple_report_to_dict(report: TripleReport) -> dict:
    return {
        "holds": report.holds,
        "violations": [
            {
                "s": mask_to_players(v.s),
                "t": mask_to_players(v.t),
                "u": mask_to_players(v.u),
                "lhs": format_rational(v.lhs),
                "rhs": format_rational(v.rhs),
            }
            for v in report.violations
        ],
    }


def bundle_to_dict(bundle: CounterexampleBundle) -> dict:
    return {
        "family": bundle.family,
        "game": game_to_dict(bundle.game),
        "weights": weights_to_dict(bundle.ws),
        "graph": graph_to_dict(bundle.graph),
        "witness_s": mask_to_players(bundle.witness_s),
        "witness_t": mask_to_players(bundle.witness_t),
        "params": {k: format_rational(v) for k, v in bundle.params.items()},
    }


def bundle_from_dict(data: dict) -> CounterexampleBundle:
    try:
        game = game_from_dict(data["game"])
        ws = weights_from_dict(data["weights"])
        graph = graph_from_dict(data["graph"])
        witness_s = players_to_mask(data["witness_s"], game.n)
        witness_t = players_to_mask(data["witness_t"], game.n)
    except (TypeError, KeyError) as exc:
        raise ParseError("bundle files need game, weights, graph, and witness fields") from exc
    params = {k: parse_rational(v) for k, v in data.get("params", {}).items()}
    return CounterexampleBundle(game, ws, graph, witness_s, witness_t, params, data.get("family", ""))


def diagnosis_to_dict(diag: StructureDiagnosis) -> dict:
    def check(c):
        return {"ok": c.ok, "witness": _jsonable(c.witness)}

    return {
        "cycle_rule": check(diag.cycle_rule),
        "layer_shapes": check(diag.layer_shapes),
        "uplink_rule": check(diag.uplink_rule),
        "component_links": check(diag.component_links),
    }


def chain_to_list(chain: tuple[ChainStar, ...]) -> list[dict]:
    return [
        {
            "priority": star.priority,
            "nodes": mask_to_players(star.nodes),
            "center": star.center + 1,
            "bridge": [star.bridge[0] + 1, star.bridge[1] + 1] if star.bridge else None,
        }
        for star in chain
    ]


def _jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    return str(obj)


def load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def dump_json(data, path: str | None = None) -> str:
    text = json.dumps(data, indent=2, sort_keys=False)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
