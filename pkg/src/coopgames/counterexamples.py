"""Self-verifying counterexample families for convexity preservation.

Three constructions defeat inheritance of weighted average-convexity through
a communication graph:

* a non-complete cycle carrying a top-priority node whose cycle neighbors
  are not linked, fed the size-minus-one game;
* a 3-pan (triangle plus pendant) whose node priorities sandwich the pendant
  below the attach node, fed a four-parameter game tuned to the weights;
* a 4-path whose inner nodes weakly dominate its ends, fed either the same
  parameterized game or a 0/1 game when both inner priorities strictly
  dominate.

Each bundle packages the game, weight system, graph, and the nested witness
pair at which the restricted game breaks the convexity inequality, and can
be re-verified from scratch.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .convexity import check_weighted_average_convexity, convexity_sides
from .games import TuGame, game_from_coefficients, is_convex, make_game
from .graphs import Graph, graph_from_edges, restricted_game
from .masks import bits, coalition
from .weights import WeightSystem

# Roles follow the reference drawing: the pan is a triangle on roles
# (0, 1, 3) with role 2 pendant on role 1; the path runs 0-3-1-2.
_PAN_EDGES = ((0, 3), (0, 1), (1, 3), (1, 2))
_PATH_EDGES = ((0, 3), (3, 1), (1, 2))


@dataclass(frozen=True)
class CounterexampleBundle:
    game: TuGame
    ws: WeightSystem
    graph: Graph
    witness_s: int
    witness_t: int
    params: dict[str, Fraction] = field(default_factory=dict)
    family: str = ""


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    failure: str | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_bundle(bundle: CounterexampleBundle) -> VerifyResult:
    """Re-check both bundle invariants from scratch.

    The base game must pass the full weighted average-convexity scan, and the
    restricted game must break the inequality at the stated witness pair.
    """
    if not (0 < bundle.witness_s < bundle.witness_t <= bundle.game.full):
        return VerifyResult(False, "witness pair is not properly nested")
    if bundle.witness_s & ~bundle.witness_t:
        return VerifyResult(False, "witness pair is not properly nested")
    base = check_weighted_average_convexity(bundle.game, bundle.ws)
    if not base.holds:
        v = base.violations[0]
        return VerifyResult(False, "base game is not weighted average-convex", v.lhs, v.rhs)
    restricted = restricted_game(bundle.game, bundle.graph)
    lhs, rhs = convexity_sides(restricted, bundle.ws, bundle.witness_s, bundle.witness_t)
    if lhs <= rhs:
        return VerifyResult(False, "restricted game satisfies the inequality at the witness", lhs, rhs)
    return VerifyResult(True, None, lhs, rhs)


def noncomplete_cycle_bundle(cycle_nodes, chords, lstar: int, ws: WeightSystem) -> CounterexampleBundle:
    """Size-minus-one game on a non-complete cycle with chords.

    ``lstar`` must carry the cycle's priority and its two cycle neighbors
    must not be linked, directly or by chord.
    """
    nodes = tuple(cycle_nodes)
    if len(nodes) < 3 or len(set(nodes)) != len(nodes):
        raise ValueError("the cycle needs at least three distinct nodes")
    cyc_mask = coalition(*nodes)
    if lstar not in nodes:
        raise ValueError("the pivot node must lie on the cycle")
    edges = set(zip(nodes, nodes[1:] + nodes[:1]))
    edges = {(min(a, b), max(a, b)) for a, b in edges}
    for a, b in chords:
        if not (cyc_mask & (1 << a) and cyc_mask & (1 << b)):
            raise ValueError("chords must join cycle nodes")
        edges.add((min(a, b), max(a, b)))
    g = graph_from_edges(ws.n, edges)
    if all(g.has_edge(a, b) for a, b in _pairs(nodes)):
        raise ValueError("the cycle with its chords is complete")
    idx = nodes.index(lstar)
    before, after = nodes[idx - 1], nodes[(idx + 1) % len(nodes)]
    if g.has_edge(before, after):
        raise ValueError("the pivot's cycle neighbors are linked, no violation arises")
    if ws.priorities[lstar] != ws.priority_of(cyc_mask):
        raise ValueError("the pivot must carry the cycle's priority")
    game = make_game(
        ws.n, {mask: Fraction(mask.bit_count() - 1) for mask in range(1, 1 << ws.n)}
    )
    return CounterexampleBundle(
        game=game,
        ws=ws,
        graph=g,
        witness_s=coalition(before, lstar, after),
        witness_t=cyc_mask,
        params={"defect": ws.weights[lstar]},
        family="cycle",
    )


def _pairs(nodes):
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            yield a, b


def _pan_game_values(ws: WeightSystem, roles: tuple[int, int, int, int]):
    """Parameter map and role-coalition table of the pan-family game."""
    r = roles
    w = [ws.weights[p] for p in r]
    p = [ws.priorities[p] for p in r]
    alpha = Fraction(1) if p[1] == p[3] and p[3] > p[2] else Fraction(0)
    x = max(1 + w[1] / w[3], 1 + w[2] / w[3])
    y = 1 + w[0] / w[3]
    z = x + 2 * y + (1 - alpha) * (w[0] / (w[1] + w[2] + w[3]) * x - w[0] / w[3])
    theta = z + x - 1
    table = {
        coalition(0, 1, 2): alpha * (x - 1),
        coalition(0, 3): x,
        coalition(1, 3): alpha * y,
        coalition(2, 3): y,
        coalition(0, 1, 3): x + alpha * (y - 1),
        coalition(0, 2, 3): x + y - 1,
        coalition(1, 2, 3): z,
        coalition(0, 1, 2, 3): theta,
    }
    params = {"pair14": x, "pair34": y, "triple234": z, "grand": theta, "level_flag": alpha}
    return table, params


_STRICT_PATH_ONES = (
    coalition(0, 3),
    coalition(2, 3),
    coalition(0, 1, 3),
    coalition(0, 2, 3),
    coalition(1, 2, 3),
    coalition(0, 1, 2, 3),
)


def _embed_table(n: int, roles, table) -> TuGame:
    """Lift a 4-role value table to n players; everyone else is null."""
    full = {}
    role_set = coalition(*roles)
    role_index = {p: k for k, p in enumerate(roles)}
    for mask in range(1, 1 << n):
        inner = 0
        for i in bits(mask & role_set):
            inner |= 1 << role_index[i]
        val = table.get(inner, Fraction(0))
        if val:
            full[mask] = val
    return make_game(n, full)


def _role_witness(roles) -> tuple[int, int]:
    s = coalition(roles[1], roles[2], roles[3])
    t = coalition(*roles)
    return s, t


def _pan_candidate(ws: WeightSystem, roles) -> tuple[TuGame, tuple[int, int], dict] | None:
    """Pan-family game for the given role assignment, if priorities allow."""
    p = [ws.priorities[i] for i in roles]
    if not (p[1] >= max(p[0], p[3]) >= p[2]):
        return None
    if p[0] > p[3]:
        roles = (roles[3], roles[1], roles[2], roles[0])
    table, params = _pan_game_values(ws, roles)
    game = _embed_table(ws.n, roles, table)
    return game, _role_witness(roles), params


def _path_candidate(ws: WeightSystem, roles) -> tuple[TuGame, tuple[int, int], dict] | None:
    """Path-family game for roles laid out along the path 0-3-1-2."""
    p = [ws.priorities[i] for i in roles]
    if not (min(p[1], p[3]) >= max(p[0], p[2])):
        return None
    if p[3] > p[1]:
        roles = (roles[2], roles[3], roles[0], roles[1])  # walk the path backwards
        p = [ws.priorities[i] for i in roles]
    if p[1] == p[3] and p[3] > max(p[0], p[2]):
        table = {mask: Fraction(1) for mask in _STRICT_PATH_ONES}
        params: dict[str, Fraction] = {}
    else:
        if p[1] == p[3] and p[0] > p[2]:
            roles = (roles[2], roles[3], roles[0], roles[1])
        table, params = _pan_game_values(ws, roles)
        if params["level_flag"] != 0:
            return None  # the pan game only transfers to the path without the flag
    game = _embed_table(ws.n, roles, table)
    return game, _role_witness(roles), params


def threepan_bundle(ws: WeightSystem, relabel=None) -> CounterexampleBundle:
    """Parameterized game breaking preservation on the 3-pan.

    ``relabel`` assigns actual players to the four drawing roles (triangle
    wing, attach, pendant, wing). Priorities must put the attach node weakly
    above both wings and the wings weakly above the pendant; the two wings
    are swapped internally when needed.
    """
    if ws.n != 4:
        raise ValueError("the pan construction needs exactly four players")
    roles = tuple(relabel) if relabel is not None else (0, 1, 2, 3)
    _check_roles(roles, ws.n)
    cand = _pan_candidate(ws, roles)
    if cand is None:
        raise ValueError("priorities must sandwich the pendant below the attach node")
    game, (s, t), params = cand
    g = graph_from_edges(4, ((roles[a], roles[b]) for a, b in _PAN_EDGES))
    return CounterexampleBundle(game, ws, g, s, t, params, family="threepan")


def fourpath_bundle(ws: WeightSystem, relabel=None) -> CounterexampleBundle:
    """Game breaking preservation on the 4-path.

    ``relabel`` lists the four roles; the path visits them as role 0, 3, 1, 2.
    Inner nodes must weakly dominate the ends; with strict domination the 0/1
    game applies, otherwise the pan-family game transfers to the path.
    """
    if ws.n != 4:
        raise ValueError("the path construction needs exactly four players")
    roles = tuple(relabel) if relabel is not None else (0, 1, 2, 3)
    _check_roles(roles, ws.n)
    cand = _path_candidate(ws, roles)
    if cand is None:
        raise ValueError("inner path nodes must weakly dominate the end nodes")
    game, (s, t), params = cand
    g = graph_from_edges(4, ((roles[a], roles[b]) for a, b in _PATH_EDGES))
    family = "fourpath" if not params else "fourpath-pan"
    return CounterexampleBundle(game, ws, g, s, t, params, family=family)


def _check_roles(roles, n):
    if len(roles) != 4 or len(set(roles)) != 4 or any(not 0 <= r < n for r in roles):
        raise ValueError("the relabeling must list four distinct players")


def random_wac_game(n: int, ws: WeightSystem, seed: int) -> TuGame:
    """Deterministic random convex game, hence weighted average-convex.

    Nonnegative coefficients on every coalition of size two or more keep the
    game convex for free; singleton coefficients may take either sign. Small
    integer numerators over a fixed denominator keep the rationals compact.
    """
    rng = random.Random(seed)
    coeffs: dict[int, Fraction] = {}
    for mask in range(1, 1 << n):
        if mask.bit_count() == 1:
            num = rng.randint(-4, 4)
        else:
            num = max(0, rng.randint(-4, 6))
        if num:
            coeffs[mask] = Fraction(num, 2)
    game = game_from_coefficients(coeffs, n)
    assert is_convex(game), "nonnegative coefficients must yield a convex game"
    return game


@dataclass(frozen=True)
class FuzzHit:
    game: TuGame
    witness_s: int
    witness_t: int
    lhs: Fraction
    rhs: Fraction
    origin: str
    trial: int


def _seeded_candidates(g: Graph, ws: WeightSystem) -> Iterator[tuple[TuGame, tuple[int, int], dict, str]]:
    """Family games specialized to the induced patterns of a host graph."""
    from .structure import simple_cycles

    for cycle in simple_cycles(g):
        cmask = coalition(*cycle)
        prio = ws.priority_of(cmask)
        for idx, node in enumerate(cycle):
            if ws.priorities[node] != prio:
                continue
            before, after = cycle[idx - 1], cycle[(idx + 1) % len(cycle)]
            if g.has_edge(before, after):
                continue
            game = make_game(
                ws.n, {mask: Fraction(mask.bit_count() - 1) for mask in range(1, 1 << ws.n)}
            )
            witness = (coalition(before, node, after), cmask)
            yield game, witness, {"defect": ws.weights[node]}, "cycle"
    for attach, w1, w2, pendant in _induced_3pans(g):
        for wings in ((w1, w2), (w2, w1)):
            cand = _pan_candidate(ws, (wings[0], attach, pendant, wings[1]))
            if cand is not None:
                game, witness, params = cand
                yield game, witness, params, "threepan"
                break
    for a, b, c, d in _induced_4paths(g):
        cand = _path_candidate(ws, (a, c, d, b))  # path a-b-c-d visits roles 0-3-1-2
        if cand is not None:
            game, witness, params = cand
            yield game, witness, params, "fourpath" if not params else "fourpath-pan"


def _induced_3pans(g: Graph) -> Iterator[tuple[int, int, int, int]]:
    from itertools import combinations

    for quad in combinations(range(g.n), 4):
        edges = [(a, b) for a, b in combinations(quad, 2) if g.has_edge(a, b)]
        if len(edges) != 4:
            continue
        deg = {v: 0 for v in quad}
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
        if sorted(deg.values()) != [1, 2, 2, 3]:
            continue
        attach = next(v for v in quad if deg[v] == 3)
        pendant = next(v for v in quad if deg[v] == 1)
        if not g.has_edge(attach, pendant):
            continue
        wings = [v for v in quad if deg[v] == 2]
        if g.has_edge(wings[0], wings[1]):
            yield attach, wings[0], wings[1], pendant


def _induced_4paths(g: Graph) -> Iterator[tuple[int, int, int, int]]:
    from itertools import combinations

    for quad in combinations(range(g.n), 4):
        edges = [(a, b) for a, b in combinations(quad, 2) if g.has_edge(a, b)]
        if len(edges) != 3:
            continue
        deg = {v: 0 for v in quad}
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
        if sorted(deg.values()) != [1, 1, 2, 2]:
            continue
        ends = sorted(v for v in quad if deg[v] == 1)
        order = [ends[0]]
        while len(order) < 4:
            order.append(next(v for v in quad if v not in order and g.has_edge(order[-1], v)))
        yield tuple(order)


def preservation_fuzz(g: Graph, ws: WeightSystem, trials: int, seed: int) -> FuzzHit | None:
    """Look for a weighted average-convex game whose restriction is not.

    The family games matching the host graph's induced patterns run first,
    then ``trials`` random convex games; the first game whose restriction
    fails the scan is returned. Deterministic for a fixed seed.
    """
    if g.n != ws.n:
        raise ValueError(f"graph has {g.n} nodes but weight system has {ws.n}")
    trial = 0
    for game, (s, t), _params, origin in _seeded_candidates(g, ws):
        if not check_weighted_average_convexity(game, ws).holds:
            continue
        restricted = restricted_game(game, g)
        lhs, rhs = convexity_sides(restricted, ws, s, t)
        if lhs > rhs:
            return FuzzHit(game, s, t, lhs, rhs, origin, trial)
        trial += 1
    rng = random.Random(seed)
    for k in range(trials):
        game = random_wac_game(g.n, ws, rng.randrange(1 << 62))
        report = check_weighted_average_convexity(restricted_game(game, g), ws)
        if not report.holds:
            v = report.violations[0]
            return FuzzHit(game, v.s, v.t, v.lhs, v.rhs, "random", trial + k)
    return None


def search_counterexample(g: Graph, ws: WeightSystem, budget: int, seed: int) -> CounterexampleBundle | None:
    """First verified non-preservation bundle for the host graph, if any.

    Tries the three seeded families on every matching induced pattern, then
    falls back to ``budget`` random convex games. Every returned bundle has
    passed full re-verification.
    """
    if g.n != ws.n:
        raise ValueError(f"graph has {g.n} nodes but weight system has {ws.n}")
    for game, (s, t), params, origin in _seeded_candidates(g, ws):
        bundle = CounterexampleBundle(game, ws, g, s, t, params, family=origin)
        if verify_bundle(bundle):
            return bundle
    rng = random.Random(seed)
    for _ in range(budget):
        game = random_wac_game(g.n, ws, rng.randrange(1 << 62))
        report = check_weighted_average_convexity(restricted_game(game, g), ws)
        if not report.holds:
            v = report.violations[0]
            bundle = CounterexampleBundle(game, ws, g, v.s, v.t, {}, family="random")
            if verify_bundle(bundle):
                return bundle
    return None
