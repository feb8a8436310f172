"""Graph characterizations for convexity preservation.

Single priority class: a graph preserves weighted average-convexity exactly
when every connected component is a complete graph or a star, equivalently
when it is cycle-complete and has no induced 4-path or 3-pan.

Several priority classes: each predicate here is a necessary condition for
preservation; failing any one certifies non-preservation. For trees whose
priorities decrease away from some root, preservation is characterized
exactly by a chain-of-stars decomposition with strictly decreasing priorities
and single center-to-star bridges.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .graphs import Graph, component_of, components, graph_from_edges, induced_components
from .masks import bits, coalition, members
from .weights import WeightSystem


def simple_cycles(g: Graph) -> Iterator[tuple[int, ...]]:
    """Every simple cycle, once, as a node tuple starting at its smallest node.

    Direction is canonicalized by requiring the second node to be smaller
    than the last. Paths are pruned to nodes above the start, so each cycle
    is produced exactly once.
    """
    for start in range(g.n):
        stack = [(start, 1 << start, (start,))]
        while stack:
            node, used, path = stack.pop()
            for nxt in bits(g.adjacency[node]):
                if nxt == start:
                    if len(path) >= 3 and path[1] < path[-1]:
                        yield path
                elif nxt > start and not used & (1 << nxt):
                    stack.append((nxt, used | (1 << nxt), path + (nxt,)))


def blocks(g: Graph) -> list[int]:
    """Node masks of the biconnected components (blocks) of the graph.

    Every cycle lives inside one block, so cycle-local checks only need to
    look at blocks whose induced subgraph is not complete.
    """
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    out: list[int] = []
    counter = 0
    for root in range(g.n):
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack = [(root, None, iter(members(g.adjacency[root])))]
        edge_stack: list[tuple[int, int]] = []
        while stack:
            node, parent, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt == parent:
                    continue
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    edge_stack.append((node, nxt))
                    stack.append((nxt, node, iter(members(g.adjacency[nxt]))))
                    advanced = True
                    break
                if index[nxt] < index[node]:
                    edge_stack.append((node, nxt))
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            stack.pop()
            if stack:
                up = stack[-1][0]
                low[up] = min(low[up], low[node])
                if low[node] >= index[up]:
                    block = 0
                    while edge_stack:
                        a, b = edge_stack.pop()
                        block |= (1 << a) | (1 << b)
                        if (a, b) == (up, node):
                            break
                    if block:
                        out.append(block)
    return out


def _induces_complete(g: Graph, mask: int) -> bool:
    nodes = members(mask)
    return all(g.has_edge(a, b) for a, b in combinations(nodes, 2))


def is_cycle_complete(g: Graph) -> tuple[bool, tuple[int, ...] | None]:
    """Whether every cycle's node set induces a complete subgraph.

    Equivalent to every block being complete; when that fails, a witness
    cycle is recovered by enumerating cycles inside an offending block.
    """
    bad = [b for b in blocks(g) if b.bit_count() >= 3 and not _induces_complete(g, b)]
    if not bad:
        return True, None
    bad_union = 0
    for b in bad:
        bad_union |= b
    for cycle in simple_cycles(g):
        cmask = coalition(*cycle)
        if cmask & bad_union and not _induces_complete(g, cmask):
            return False, cycle
    raise AssertionError("a non-complete block must contain a non-complete cycle")


def cycle_priority_rule(g: Graph, ws: WeightSystem) -> tuple[bool, tuple | None]:
    """On every cycle, nodes carrying the cycle's priority need linked neighbors.

    Returns a witness (cycle, node, neighbor, neighbor) on failure. Cycles
    inside complete blocks cannot fail, so only the rest are enumerated.
    """
    bad = [b for b in blocks(g) if b.bit_count() >= 3 and not _induces_complete(g, b)]
    if not bad:
        return True, None
    bad_union = 0
    for b in bad:
        bad_union |= b
    for cycle in simple_cycles(g):
        cmask = coalition(*cycle)
        if not cmask & bad_union:
            continue
        prio = ws.priority_of(cmask)
        for idx, node in enumerate(cycle):
            if ws.priorities[node] != prio:
                continue
            before = cycle[idx - 1]
            after = cycle[(idx + 1) % len(cycle)]
            if not g.has_edge(before, after):
                return False, (cycle, node, before, after)
    return True, None


def find_induced_4path(g: Graph) -> tuple[int, int, int, int] | None:
    """First 4-node set inducing exactly a path, as (end, mid, mid, end)."""
    for quad in combinations(range(g.n), 4):
        sub = [(a, b) for a, b in combinations(quad, 2) if g.has_edge(a, b)]
        if len(sub) != 3:
            continue
        deg = {v: 0 for v in quad}
        for a, b in sub:
            deg[a] += 1
            deg[b] += 1
        if sorted(deg.values()) != [1, 1, 2, 2]:
            continue  # a triangle plus isolated node also has 3 edges
        ends = sorted(v for v in quad if deg[v] == 1)
        order = [ends[0]]
        while len(order) < 4:
            nxt = next(v for v in quad if v not in order and g.has_edge(order[-1], v))
            order.append(nxt)
        return tuple(order)
    return None


def find_induced_3pan(g: Graph) -> tuple[int, int, int, int] | None:
    """First 4-node set inducing a triangle with a pendant edge.

    Returned as (attach, wing, wing, pendant): the triangle is the first
    three nodes and the pendant hangs off the attach node.
    """
    for quad in combinations(range(g.n), 4):
        sub = [(a, b) for a, b in combinations(quad, 2) if g.has_edge(a, b)]
        if len(sub) != 4:
            continue
        deg = {v: 0 for v in quad}
        for a, b in sub:
            deg[a] += 1
            deg[b] += 1
        if sorted(deg.values()) != [1, 2, 2, 3]:
            continue  # four edges could also be a chordless 4-cycle
        attach = next(v for v in quad if deg[v] == 3)
        pendant = next(v for v in quad if deg[v] == 1)
        if not g.has_edge(attach, pendant):
            continue
        wings = sorted(v for v in quad if deg[v] == 2)
        if g.has_edge(wings[0], wings[1]):
            return attach, wings[0], wings[1], pendant
    return None


@dataclass(frozen=True)
class ComponentShape:
    kinds: frozenset[str]  # subset of {"complete", "star"}
    centers: tuple[int, ...]

    @property
    def acceptable(self) -> bool:
        return bool(self.kinds)


def classify_component(g: Graph, comp: int) -> ComponentShape:
    """Shape of one connected component: complete, star, both, or neither.

    Size-one and size-two components count as both a star and a complete
    graph; every admissible center is reported.
    """
    if comp == 0:
        raise ValueError("the component must be nonempty")
    anchor = (comp & -comp).bit_length() - 1
    if component_of(g, anchor, comp) != comp:
        raise ValueError("the node set is not connected")
    nodes = members(comp)
    if len(nodes) == 1:
        return ComponentShape(frozenset({"complete", "star"}), nodes)
    if len(nodes) == 2:
        return ComponentShape(frozenset({"complete", "star"}), nodes)
    if _induces_complete(g, comp):
        return ComponentShape(frozenset({"complete"}), ())
    for c in nodes:
        rest = comp ^ (1 << c)
        if g.adjacency[c] & comp == rest and all(
            g.adjacency[v] & comp == 1 << c for v in bits(rest)
        ):
            return ComponentShape(frozenset({"star"}), (c,))
    return ComponentShape(frozenset(), ())


def singleton_characterization(g: Graph) -> bool:
    """Exact preservation predicate for a single priority class.

    True when every connected component is a complete graph or a star.
    """
    return all(classify_component(g, comp).acceptable for comp in components(g))


def layer_subgraph(g: Graph, ws: WeightSystem, level: int) -> Graph:
    """Subgraph keeping only edges between players of priority ``level``."""
    if not 1 <= level <= ws.m:
        raise ValueError(f"priority level must be in 1..{ws.m}, got {level}")
    layer = ws.partition[level - 1]
    edges = [(a, b) for a, b in g.edges if layer & (1 << a) and layer & (1 << b)]
    return graph_from_edges(g.n, edges)


@dataclass(frozen=True)
class Check:
    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class StructureDiagnosis:
    cycle_rule: Check
    layer_shapes: Check
    uplink_rule: Check
    component_links: Check

    @property
    def all_ok(self) -> bool:
        return bool(self.cycle_rule and self.layer_shapes and self.uplink_rule and self.component_links)


def _layer_components(g: Graph, ws: WeightSystem) -> list[list[int]]:
    """Per level (index 0 = priority 1): component masks inside that layer."""
    return [induced_components(g, ws.partition[k]) for k in range(ws.m)]


def _linked(g: Graph, a_mask: int, b_mask: int) -> bool:
    reach = 0
    for i in bits(a_mask):
        reach |= g.adjacency[i]
    return bool(reach & b_mask)


def _neighbors_of_mask(g: Graph, mask: int) -> int:
    reach = 0
    for i in bits(mask):
        reach |= g.adjacency[i]
    return reach & ~mask


def _check_layer_shapes(g: Graph, ws: WeightSystem) -> Check:
    for k in range(1, ws.m + 1):
        gk = layer_subgraph(g, ws, k)
        for comp in induced_components(g, ws.partition[k - 1]):
            if not classify_component(gk, comp).acceptable:
                return Check(False, ("layer", k, members(comp)))
    return Check(True)


def _check_uplinks(g: Graph, ws: WeightSystem) -> Check:
    for a, b in sorted(g.edges):
        pa, pb = ws.priorities[a], ws.priorities[b]
        if pa == pb:
            continue
        low, high = (a, b) if pa < pb else (b, a)
        layer = ws.partition[ws.priorities[high] - 1]
        comp = component_of(g, high, layer)
        if comp.bit_count() <= 2:
            continue
        shape = classify_component(layer_subgraph(g, ws, ws.priorities[high]), comp)
        if "complete" in shape.kinds:
            missing = comp & ~g.adjacency[low] & ~(1 << low)
            if missing:
                t = (missing & -missing).bit_length() - 1
                return Check(False, ("incomplete_uplink", low, high, t))
        elif "star" in shape.kinds:
            center = shape.centers[0]
            if high != center:
                other = next(i for i in bits(comp) if i not in (center, high))
                return Check(False, ("leaf_uplink", low, high, center, other))
            touched_leaf = g.adjacency[low] & comp & ~(1 << center)
            if touched_leaf:
                leaf = (touched_leaf & -touched_leaf).bit_length() - 1
                return Check(False, ("center_and_leaf_uplink", low, center, leaf))
        # a misshapen layer component is reported by the layer check instead
    return Check(True)


def _check_component_links(g: Graph, ws: WeightSystem) -> Check:
    layer_comps = _layer_components(g, ws)
    for k2 in range(2, ws.m + 1):  # priority of the upper component C
        for c_upper in layer_comps[k2 - 1]:
            nbr_upper = _neighbors_of_mask(g, c_upper)
            attached = []  # (level, component) pairs hanging below C
            for k0 in range(1, k2):
                for c_low in layer_comps[k0 - 1]:
                    if _linked(g, c_low, c_upper):
                        attached.append((k0, c_low))
            for (ka, comp_a), (kb, comp_b) in combinations(attached, 2):
                # orient so comp_b sits at the weakly higher of the two levels
                if ka > kb:
                    (ka, comp_a), (kb, comp_b) = (kb, comp_b), (ka, comp_a)
                verdict = _pairwise_link_rule(g, ws, c_upper, k2, comp_a, ka, comp_b, kb, attached)
                if verdict is not None:
                    return verdict
    return Check(True)


def _pairwise_link_rule(g, ws, c_upper, k2, comp_a, ka, comp_b, kb, attached) -> Check | None:
    anchors = c_upper & _neighbors_of_mask(g, comp_a) & _neighbors_of_mask(g, comp_b)
    if not anchors:
        return Check(False, ("no_common_anchor", members(comp_a), members(comp_b), members(c_upper)))
    if not _linked(g, comp_a, comp_b):
        if comp_b.bit_count() != 1:
            return Check(False, ("unlinked_partner_not_singleton", members(comp_a), members(comp_b)))
        if ka == kb and comp_a.bit_count() != 1:
            return Check(False, ("unlinked_partner_not_singleton", members(comp_b), members(comp_a)))
        shape = classify_component(layer_subgraph(g, ws, k2), c_upper)
        good_center = None
        for c in shape.centers if "star" in shape.kinds else ():
            if (_neighbors_of_mask(g, comp_a) & c_upper) == (1 << c) and (
                _neighbors_of_mask(g, comp_b) & c_upper
            ) == (1 << c):
                good_center = c
                break
        if good_center is None:
            return Check(False, ("links_not_at_one_center", members(comp_a), members(comp_b), members(c_upper)))
        lower_than = 0
        for k in range(0, kb - 1):
            lower_than |= ws.partition[k]
        if ka == kb and _neighbors_of_mask(g, comp_a) & lower_than:
            return Check(False, ("singleton_linked_below", members(comp_a)))
        if _neighbors_of_mask(g, comp_b) & lower_than:
            return Check(False, ("singleton_linked_below", members(comp_b)))
        # every route between the two must pass through the shared center
        without = g.full ^ (1 << good_center)
        anchor_a = (comp_a & -comp_a).bit_length() - 1
        if component_of(g, anchor_a, without) & comp_b:
            return Check(False, ("detour_avoids_center", members(comp_a), members(comp_b), good_center))
        return None
    # the two lower components are linked to each other
    if ka == kb:
        return Check(False, ("same_level_components_linked", members(comp_a), members(comp_b)))
    triangle = None
    for i in bits(anchors):
        for j1 in bits(g.adjacency[i] & comp_a):
            both = g.adjacency[i] & g.adjacency[j1] & comp_b
            if both:
                j2 = (both & -both).bit_length() - 1
                triangle = (i, j1, j2)
                break
        if triangle:
            break
    if triangle is None:
        return Check(False, ("linked_pair_without_triangle", members(comp_a), members(comp_b), members(c_upper)))
    i, j1, j2 = triangle
    for kc, comp_c in attached:
        if comp_c in (comp_a, comp_b) or kc > kb:
            continue
        if kc in (ka, kb):
            return Check(False, ("third_component_on_used_level", members(comp_c), kc))
        if not (_linked(g, comp_c, 1 << j1) and _linked(g, comp_c, 1 << j2)):
            return Check(False, ("third_component_misses_triangle", members(comp_c), j1, j2))
    return None


def necessary_conditions(g: Graph, ws: WeightSystem) -> StructureDiagnosis:
    """Evaluate every necessary preservation condition as a pure predicate.

    Any failed check certifies that the graph does not preserve weighted
    average-convexity for this weight system; all checks passing proves
    nothing beyond the single-priority and decreasing-tree cases.
    """
    if g.n != ws.n:
        raise ValueError(f"graph has {g.n} nodes but weight system has {ws.n}")
    ok, witness = cycle_priority_rule(g, ws)
    return StructureDiagnosis(
        cycle_rule=Check(ok, witness),
        layer_shapes=_check_layer_shapes(g, ws),
        uplink_rule=_check_uplinks(g, ws),
        component_links=_check_component_links(g, ws),
    )


def is_priority_decreasing_tree(g: Graph, ws: WeightSystem) -> int | None:
    """A root making priorities non-increasing away from it, if one exists.

    The graph must be a tree (connected and acyclic); all roots are tried in
    increasing order and the first that works is returned.
    """
    if g.n != ws.n:
        raise ValueError(f"graph has {g.n} nodes but weight system has {ws.n}")
    if len(g.edges) != g.n - 1 or len(components(g)) != 1:
        return None
    for root in range(g.n):
        stack = [root]
        seen = 1 << root
        ok = True
        while stack and ok:
            node = stack.pop()
            for child in bits(g.adjacency[node] & ~seen):
                if ws.priorities[child] > ws.priorities[node]:
                    ok = False
                    break
                seen |= 1 << child
                stack.append(child)
        if ok:
            return root
    return None


@dataclass(frozen=True)
class ChainStar:
    priority: int
    nodes: int
    center: int
    bridge: tuple[int, int] | None  # (this star's center, top node of the next star)


def hierarchy_characterization(g: Graph, ws: WeightSystem) -> tuple[bool, tuple[ChainStar, ...] | None]:
    """Exact preservation predicate for priority-decreasing trees.

    Searches for a partition of the priority scale into consecutive bands,
    topped by strictly decreasing priorities, such that every band induces a
    star whose center carries the band's top priority and consecutive bands
    are joined by exactly one edge from the upper center to a node carrying
    the lower band's top priority. Returns the chain when it exists.
    """
    if is_priority_decreasing_tree(g, ws) is None:
        raise ValueError("the graph is not a priority-decreasing tree for this weight system")
    kbar = ws.m
    lower_levels = list(range(1, kbar))
    for cut_count in range(len(lower_levels) + 1):
        for cuts in combinations(lower_levels, cut_count):
            chain = [kbar] + sorted(cuts, reverse=True)
            stars = _try_chain(g, ws, chain)
            if stars is not None:
                return True, stars
    return False, None


def _try_chain(g: Graph, ws: WeightSystem, chain: list[int]) -> tuple[ChainStar, ...] | None:
    m = len(chain)
    bands = []
    for l, k in enumerate(chain):
        nxt = chain[l + 1] if l + 1 < m else 0
        band = 0
        for level in range(nxt + 1, k + 1):
            band |= ws.partition[level - 1]
        bands.append(band)
    band_of = {}
    for l, band in enumerate(bands):
        for i in bits(band):
            band_of[i] = l
    bridges: dict[int, list[tuple[int, int]]] = {l: [] for l in range(m - 1)}
    for a, b in sorted(g.edges):
        la, lb = band_of[a], band_of[b]
        if la == lb:
            continue
        if abs(la - lb) != 1:
            return None
        upper, lower = (a, b) if la < lb else (b, a)
        bridges[min(la, lb)].append((upper, lower))
    stars = []
    for l, band in enumerate(bands):
        pieces = induced_components(g, band)
        if len(pieces) != 1:
            return None
        shape = classify_component(_band_graph(g, band), band)
        if "star" not in shape.kinds:
            return None
        centers = [c for c in shape.centers if ws.priorities[c] == chain[l]]
        if l < m - 1:
            if len(bridges[l]) != 1:
                return None
            upper, lower = bridges[l][0]
            if ws.priorities[lower] != chain[l + 1] or upper not in centers:
                return None
            center = upper
            bridge = (upper, lower)
        else:
            if not centers:
                return None
            center = centers[0]
            bridge = None
        stars.append(ChainStar(chain[l], band, center, bridge))
    return tuple(stars)


def _band_graph(g: Graph, band: int) -> Graph:
    edges = [(a, b) for a, b in g.edges if band & (1 << a) and band & (1 << b)]
    return graph_from_edges(g.n, edges)
