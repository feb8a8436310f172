"""Communication graphs and the graph-restricted game.

The worth of a coalition in the restricted game is the sum of the original
worths of its connected pieces inside the graph. The full-table restriction
peels one component per step and reuses smaller table entries; a union-find
oracle recomputes components independently for cross-checking.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .games import TuGame
from .masks import bits
from .weights import WeightSystem


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    adjacency: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one node")
        norm = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError("self-loops are not allowed")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a}, {b}) out of range for {self.n} nodes")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))
        adj = [0] * self.n
        for a, b in norm:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        object.__setattr__(self, "adjacency", tuple(adj))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges


def graph_from_edges(n: int, pairs) -> Graph:
    return Graph(n, frozenset((a, b) for a, b in pairs))


def complete_graph(n: int) -> Graph:
    return graph_from_edges(n, combinations(range(n), 2))


def star_graph(n: int, center: int = 0) -> Graph:
    return graph_from_edges(n, ((center, i) for i in range(n) if i != center))


def path_graph(nodes) -> Graph:
    nodes = list(nodes)
    return graph_from_edges(max(nodes) + 1, zip(nodes, nodes[1:]))


def cycle_graph(nodes) -> Graph:
    nodes = list(nodes)
    return graph_from_edges(max(nodes) + 1, zip(nodes, nodes[1:] + nodes[:1]))


def component_of(g: Graph, start: int, inside: int) -> int:
    """Connected component of ``start`` in the subgraph induced by ``inside``."""
    comp = 1 << start
    while True:
        grown = comp
        for i in bits(comp):
            grown |= g.adjacency[i] & inside
        if grown == comp:
            return comp
        comp = grown


def induced_components(g: Graph, coalition: int) -> list[int]:
    """Maximal connected pieces of a coalition, lowest member first."""
    out = []
    rest = coalition
    while rest:
        anchor = (rest & -rest).bit_length() - 1
        comp = component_of(g, anchor, rest)
        out.append(comp)
        rest ^= comp
    return out


def components(g: Graph) -> list[int]:
    return induced_components(g, g.full)


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


def restricted_game(v: TuGame, g: Graph) -> TuGame:
    """Full table of the communication game induced by ``g``."""
    if v.n != g.n:
        raise ValueError(f"game has {v.n} players but graph has {g.n} nodes")
    vals = v.values
    out = [Fraction(0)] * (1 << v.n)
    for mask in range(1, 1 << v.n):
        anchor = (mask & -mask).bit_length() - 1
        comp = component_of(g, anchor, mask)
        out[mask] = vals[comp] + out[mask ^ comp]
    return TuGame(v.n, tuple(out))


def restricted_game_unionfind(v: TuGame, g: Graph) -> TuGame:
    """Independent oracle for the restriction, via union-find per coalition."""
    if v.n != g.n:
        raise ValueError(f"game has {v.n} players but graph has {g.n} nodes")
    out = [Fraction(0)] * (1 << v.n)
    edge_list = sorted(g.edges)
    for mask in range(1, 1 << v.n):
        parent = {i: i for i in bits(mask)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in edge_list:
            if mask & (1 << a) and mask & (1 << b):
                parent[find(a)] = find(b)
        groups: dict[int, int] = {}
        for i in parent:
            root = find(i)
            groups[root] = groups.get(root, 0) | (1 << i)
        out[mask] = sum((v.values[c] for c in groups.values()), Fraction(0))
    return TuGame(v.n, tuple(out))


def preservation_fuzz(g: Graph, ws: WeightSystem, trials: int, seed: int):
    """Randomized falsification of convexity preservation; see counterexamples."""
    from .counterexamples import preservation_fuzz as _impl

    return _impl(g, ws, trials, seed)
