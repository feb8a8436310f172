"""Weight systems: strictly positive player weights plus ordered priorities.

The partition lists priority classes from lowest to highest; the priority of
a coalition is the highest class it touches, and its top set is the members
in that class. Effective weights vanish outside the top set, which is what
every weighted computation in the package keys on.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .masks import bits, members


@dataclass(frozen=True)
class WeightSystem:
    n: int
    weights: tuple[Fraction, ...]
    partition: tuple[int, ...]  # coalition masks, lowest priority first
    priorities: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one player")
        w = tuple(Fraction(x) for x in self.weights)
        if len(w) != self.n:
            raise ValueError("need one weight per player")
        if any(x <= 0 for x in w):
            raise ValueError("weights must be strictly positive")
        object.__setattr__(self, "weights", w)
        part = tuple(self.partition)
        full = (1 << self.n) - 1
        union = 0
        for block in part:
            if block == 0:
                raise ValueError("partition blocks must be nonempty")
            if block & union:
                raise ValueError("partition blocks must be disjoint")
            union |= block
        if union != full:
            raise ValueError("partition must cover all players")
        object.__setattr__(self, "partition", part)
        prio = [0] * self.n
        for k, block in enumerate(part, start=1):
            for i in bits(block):
                prio[i] = k
        object.__setattr__(self, "priorities", tuple(prio))

    @property
    def m(self) -> int:
        return len(self.partition)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def priority(self, player: int) -> int:
        return self.priorities[player]

    def priority_of(self, coalition: int) -> int:
        """Priority of a nonempty coalition: the highest class it meets."""
        if coalition == 0:
            raise ValueError("the empty coalition has no priority")
        for k in range(self.m, 0, -1):
            if self.partition[k - 1] & coalition:
                return k
        raise AssertionError("partition does not cover the coalition")

    def top_set(self, coalition: int) -> int:
        """Members of the coalition holding its highest priority."""
        return coalition & self.partition[self.priority_of(coalition) - 1]

    def effective_weight(self, coalition: int, player: int) -> Fraction:
        """The player's weight if it sits in the coalition's top set, else 0."""
        if coalition and (1 << player) & self.top_set(coalition):
            return self.weights[player]
        return Fraction(0)

    def effective_total(self, coalition: int) -> Fraction:
        """Sum of weights over the coalition's top set; strictly positive."""
        top = self.top_set(coalition)
        return sum((self.weights[i] for i in bits(top)), Fraction(0))


def simple_system(weights) -> WeightSystem:
    """Weight system with a single priority class covering everyone."""
    weights = tuple(Fraction(x) for x in weights)
    n = len(weights)
    return WeightSystem(n, weights, ((1 << n) - 1,))


def uniform_system(n: int) -> WeightSystem:
    """Unit weights, single priority class: the classical symmetric setting."""
    return simple_system((Fraction(1),) * n)


def restrict_system(ws: WeightSystem, carrier: int) -> WeightSystem:
    """Weight system induced on the players of ``carrier``, renumbered.

    Relative priorities are preserved; classes that lose all members drop out.
    """
    if carrier == 0:
        raise ValueError("the carrier coalition must be nonempty")
    players = members(carrier)
    new_index = {p: j for j, p in enumerate(players)}
    weights = tuple(ws.weights[p] for p in players)
    part = []
    for block in ws.partition:
        kept = 0
        for i in bits(block & carrier):
            kept |= 1 << new_index[i]
        if kept:
            part.append(kept)
    return WeightSystem(len(players), weights, tuple(part))


@lru_cache(maxsize=1024)
def int_weights(ws: WeightSystem) -> tuple[int, ...]:
    """Weights scaled to integers by the common denominator.

    Positive scaling never changes any verdict the scanners compute.
    """
    scale = lcm(*(w.denominator for w in ws.weights))
    return tuple(w.numerator * (scale // w.denominator) for w in ws.weights)
