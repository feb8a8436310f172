"""Weighted Shapley values, computed four independent ways.

The four routes (unanimity coefficients, random-order expectation, the
recursive scheme over subgames, and marginal coefficients) must agree as
exact rational vectors; that agreement is the module's central test surface.
"""

from fractions import Fraction
from itertools import permutations

from .games import TuGame, subgame, unanimity_coefficients
from .masks import bits, members, submasks
from .weights import WeightSystem, restrict_system, uniform_system

Allocation = tuple[Fraction, ...]

ORDER_ENUM_LIMIT = 9  # n! order enumeration stops being a desk-scale tool here


def shapley(v: TuGame) -> Allocation:
    """Classical Shapley value: each coefficient split equally over its carrier."""
    out = [Fraction(0)] * v.n
    for mask, lam in unanimity_coefficients(v).items():
        share = lam / mask.bit_count()
        for i in bits(mask):
            out[i] += share
    return tuple(out)


def weighted_shapley_dividends(v: TuGame, ws: WeightSystem) -> Allocation:
    """Weighted Shapley value: coefficients split over top sets by weight."""
    _check_same_n(v, ws)
    out = [Fraction(0)] * v.n
    for mask, lam in unanimity_coefficients(v).items():
        top = ws.top_set(mask)
        total = sum((ws.weights[i] for i in bits(top)), Fraction(0))
        for i in bits(top):
            out[i] += ws.weights[i] / total * lam
    return tuple(out)


def order_distribution(ws: WeightSystem) -> list[tuple[tuple[int, ...], Fraction]]:
    """All player orders with positive probability, and their probabilities.

    Positions are filled front to back, always from the highest-priority
    players still remaining, each drawn proportionally to its weight. Orders
    that would place a lower-priority player before a higher-priority one
    have probability zero and are omitted; what remains lists players in
    non-increasing priority and the probabilities sum to exactly 1.
    """
    if ws.n > ORDER_ENUM_LIMIT:
        raise ValueError(f"order enumeration is limited to n <= {ORDER_ENUM_LIMIT}")
    layers = [members(block) for block in reversed(ws.partition)]  # highest first
    entries: list[tuple[tuple[int, ...], Fraction]] = [((), Fraction(1))]
    for layer in layers:
        new_entries = []
        for prefix, prob in entries:
            for perm in permutations(layer):
                p = prob
                remaining = sum((ws.weights[i] for i in layer), Fraction(0))
                for i in perm:
                    p *= ws.weights[i] / remaining
                    remaining -= ws.weights[i]
                new_entries.append((prefix + perm, p))
        entries = new_entries
    return entries


def weighted_shapley_orders(v: TuGame, ws: WeightSystem) -> Allocation:
    """Expected marginal contribution over the weighted order distribution.

    A player's marginal contribution in an order is taken between the tail
    coalition from that player onward and the tail strictly after it.
    """
    _check_same_n(v, ws)
    out = [Fraction(0)] * v.n
    for order, prob in order_distribution(ws):
        tail = 0
        for i in reversed(order):
            out[i] += prob * (v.values[tail | (1 << i)] - v.values[tail])
            tail |= 1 << i
    return tuple(out)


def psi_table(v: TuGame, ws: WeightSystem) -> list[list[Fraction] | None]:
    """The recursive allocation table over all subcoalitions.

    ``table[carrier][i]`` is player ``i``'s payoff in the subgame on
    ``carrier``; entry by entry this reproduces the weighted Shapley values
    of every subgame, so the grand-coalition row is the value of ``v`` itself.
    """
    _check_same_n(v, ws)
    vals = v.values
    w = ws.weights
    table: list[list[Fraction] | None] = [None] * (1 << v.n)
    for carrier in range(1, 1 << v.n):
        top = ws.top_set(carrier)
        total = sum((w[j] for j in bits(top)), Fraction(0))
        row = [Fraction(0)] * v.n
        for i in bits(carrier):
            bit = 1 << i
            acc = w[i] * (vals[carrier] - vals[carrier ^ bit]) if top & bit else Fraction(0)
            for j in bits(top & ~bit):
                acc += w[j] * table[carrier ^ (1 << j)][i]
            row[i] = acc / total
        table[carrier] = row
    return table


def weighted_shapley_recursive(v: TuGame, ws: WeightSystem) -> Allocation:
    """Weighted Shapley value via the subgame recursion."""
    return tuple(psi_table(v, ws)[v.full])


def marginal_coefficient(ws: WeightSystem, coalition: int, player: int, within: int | None = None) -> Fraction:
    """Coefficient of ``v(S) - v(S - i)`` in the marginal form of the value.

    Zero unless the player sits in the coalition's top set; otherwise an
    alternating sum of weight ratios over the supersets (inside ``within``,
    default everyone) that leave the coalition's priority unchanged.
    """
    if coalition == 0:
        raise ValueError("the coalition must be nonempty")
    if not coalition & (1 << player):
        raise ValueError("the player must belong to the coalition")
    if within is None:
        within = ws.full
    if coalition & ~within:
        raise ValueError("the coalition must sit inside the ground set")
    top = ws.top_set(coalition)
    if not top & (1 << player):
        return Fraction(0)
    level = ws.priority_of(coalition)
    eligible = 0  # players that can join without raising the priority
    for k in range(level):
        eligible |= ws.partition[k]
    eligible &= within & ~coalition
    w = ws.weights
    acc = Fraction(0)
    wi = w[player]
    level_mask = ws.partition[level - 1]
    for extra in submasks(eligible):
        sup = coalition | extra
        total = sum((w[j] for j in bits(sup & level_mask)), Fraction(0))
        term = wi / total
        acc += term if extra.bit_count() % 2 == 0 else -term
    return acc


def weighted_shapley_marginals(v: TuGame, ws: WeightSystem) -> Allocation:
    """Weighted Shapley value as a weighted sum of marginal contributions."""
    _check_same_n(v, ws)
    out = [Fraction(0)] * v.n
    vals = v.values
    for i in range(v.n):
        bit = 1 << i
        acc = Fraction(0)
        for rest in submasks(v.full ^ bit):
            s = rest | bit
            if not ws.top_set(s) & bit:
                continue
            diff = vals[s] - vals[s ^ bit]
            if diff:
                acc += marginal_coefficient(ws, s, i) * diff
        out[i] = acc
    return tuple(out)


def weighted_myerson(v: TuGame, g, ws: WeightSystem) -> Allocation:
    """Weighted Shapley value of the communication game on graph ``g``."""
    from .graphs import restricted_game

    return weighted_shapley_dividends(restricted_game(v, g), ws)


def subgame_value(v: TuGame, ws: WeightSystem, carrier: int) -> Allocation:
    """Weighted Shapley value of the subgame on ``carrier``, in original indices."""
    game, players = subgame(v, carrier)
    sub_ws = restrict_system(ws, carrier)
    alloc = weighted_shapley_dividends(game, sub_ws)
    out = [Fraction(0)] * v.n
    for j, p in enumerate(players):
        out[p] = alloc[j]
    return tuple(out)


def classical_check(v: TuGame) -> Allocation:
    """Classical value through the weighted code path, for cross-checking."""
    return weighted_shapley_dividends(v, uniform_system(v.n))


def _check_same_n(v: TuGame, ws: WeightSystem) -> None:
    if v.n != ws.n:
        raise ValueError(f"game has {v.n} players but weight system has {ws.n}")
