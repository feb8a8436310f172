import random
from fractions import Fraction

import pytest

from coopgames import TuGame, WeightSystem, make_game


def pm(*players: int) -> int:
    """Coalition mask from 1-based player labels, as used in the write-ups."""
    mask = 0
    for p in players:
        mask |= 1 << (p - 1)
    return mask


def size_minus_one_game(n: int) -> TuGame:
    return make_game(n, {mask: Fraction(mask.bit_count() - 1) for mask in range(1, 1 << n)})


def random_weight_system(rng: random.Random, n: int, max_levels: int = 3) -> WeightSystem:
    weights = tuple(Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(n))
    players = list(range(n))
    rng.shuffle(players)
    levels = rng.randint(1, min(max_levels, n))
    cuts = sorted(rng.sample(range(1, n), levels - 1)) if levels > 1 else []
    blocks = []
    prev = 0
    for cut in cuts + [n]:
        blocks.append(sum(1 << p for p in players[prev:cut]))
        prev = cut
    return WeightSystem(n, weights, tuple(blocks))


def random_game(rng: random.Random, n: int, lo: int = -4, hi: int = 6) -> TuGame:
    """Arbitrary (not necessarily convex) game with small rational values."""
    return make_game(
        n,
        {mask: Fraction(rng.randint(lo, hi), rng.choice((1, 2))) for mask in range(1, 1 << n)},
    )


def priority_system(priorities, weights=None) -> WeightSystem:
    """Weight system from a per-player priority vector (higher = stronger)."""
    n = len(priorities)
    levels = sorted(set(priorities))
    blocks = []
    for level in levels:
        blocks.append(sum(1 << i for i, p in enumerate(priorities) if p == level))
    if weights is None:
        weights = (Fraction(1),) * n
    return WeightSystem(n, tuple(Fraction(w) for w in weights), tuple(blocks))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
