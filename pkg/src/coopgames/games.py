"""Exact TU-games and the classical combinatorial primitives.

A game stores one :class:`fractions.Fraction` per coalition mask, so every
operation in the package is exact; no floats ever enter the computation path.
Player counts are capped at 16: the convexity scans are O(3^n) or worse and
this is the honest desk-scale limit for exact enumeration.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Mapping, NamedTuple

from .masks import bits, members, submasks

MAX_PLAYERS = 16


@dataclass(frozen=True)
class TuGame:
    """A transferable-utility game on players 0..n-1.

    ``values[mask]`` is the worth of the coalition encoded by ``mask``;
    ``values[0]`` must be zero.
    """

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_PLAYERS:
            raise ValueError(f"player count must be in 1..{MAX_PLAYERS}, got {self.n}")
        vals = tuple(Fraction(x) for x in self.values)
        if len(vals) != 1 << self.n:
            raise ValueError("value table must have exactly 2**n entries")
        if vals[0] != 0:
            raise ValueError("the empty coalition must have value 0")
        object.__setattr__(self, "values", vals)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def value(self, mask: int) -> Fraction:
        return self.values[mask]


class Subgame(NamedTuple):
    game: TuGame
    players: tuple[int, ...]  # original index of each new player, increasing


def make_game(n: int, entries: Mapping[int, Fraction | int | str]) -> TuGame:
    """Build a game from a sparse coalition->value mapping.

    Coalitions absent from ``entries`` get value 0. An explicit nonzero value
    for the empty coalition is rejected.
    """
    if not 1 <= n <= MAX_PLAYERS:
        raise ValueError(f"player count must be in 1..{MAX_PLAYERS}, got {n}")
    vals = [Fraction(0)] * (1 << n)
    for mask, val in entries.items():
        if not 0 <= mask < (1 << n):
            raise ValueError(f"coalition {mask:#x} does not fit in {n} players")
        val = Fraction(val)
        if mask == 0 and val != 0:
            raise ValueError("the empty coalition must have value 0")
        vals[mask] = val
    return TuGame(n, tuple(vals))


def unanimity_game(n: int, base: int) -> TuGame:
    """The game worth 1 exactly on supersets of the nonempty coalition ``base``."""
    if base == 0:
        raise ValueError("the base coalition must be nonempty")
    vals = [Fraction(1) if mask & base == base else Fraction(0) for mask in range(1 << n)]
    return TuGame(n, tuple(vals))


def unanimity_coefficients(v: TuGame) -> dict[int, Fraction]:
    """Coordinates of ``v`` in the unanimity basis, by exact Moebius inversion.

    Returns only the nonzero coefficients.
    """
    lam = list(v.values)
    for i in range(v.n):
        bit = 1 << i
        for mask in range(1 << v.n):
            if mask & bit:
                lam[mask] -= lam[mask ^ bit]
    return {mask: c for mask, c in enumerate(lam) if c != 0}


def game_from_coefficients(coeffs: Mapping[int, Fraction | int], n: int) -> TuGame:
    """Rebuild a game from unanimity coefficients (inverse of the inversion)."""
    if Fraction(coeffs.get(0, 0)) != 0:
        raise ValueError("the empty coalition cannot carry a coefficient")
    vals = [Fraction(0)] * (1 << n)
    for mask, c in coeffs.items():
        if not 0 <= mask < (1 << n):
            raise ValueError(f"coalition {mask:#x} does not fit in {n} players")
        vals[mask] = Fraction(c)
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                vals[mask] += vals[mask ^ bit]
    return TuGame(n, tuple(vals))


def delta(v: TuGame, a: int, b: int) -> Fraction:
    """Supermodularity defect v(A|B) + v(A&B) - v(A) - v(B)."""
    return v.values[a | b] + v.values[a & b] - v.values[a] - v.values[b]


@lru_cache(maxsize=1024)
def int_values(v: TuGame) -> tuple[int, ...]:
    """The value table scaled to integers by the common denominator.

    Scaling by a positive constant preserves the sign of every inequality the
    checkers evaluate, so scans can run on machine integers while staying exact.
    """
    scale = lcm(*(x.denominator for x in v.values))
    return tuple(x.numerator * (scale // x.denominator) for x in v.values)


def is_convex(v: TuGame) -> bool:
    """Whether the defect is nonnegative over the full double enumeration."""
    vals = int_values(v)
    full = v.full
    for a in range(full + 1):
        va = vals[a]
        for b in range(a + 1, full + 1):
            if vals[a | b] + vals[a & b] < va + vals[b]:
                return False
    return True


def is_superadditive(v: TuGame) -> bool:
    """Whether v(A|B) >= v(A) + v(B) for all disjoint coalition pairs."""
    vals = int_values(v)
    full = v.full
    for a in range(1, full + 1):
        va = vals[a]
        rest = full ^ a
        for b in submasks(rest):
            if b == 0:
                break
            if vals[a | b] < va + vals[b]:
                return False
    return True


def null_players(v: TuGame) -> int:
    """Mask of players whose marginal contribution is identically zero."""
    vals = v.values
    out = 0
    for i in range(v.n):
        bit = 1 << i
        rest = v.full ^ bit
        if all(vals[s | bit] == vals[s] for s in submasks(rest)):
            out |= bit
    return out


def subgame(v: TuGame, carrier: int) -> Subgame:
    """Restrict ``v`` to the nonempty coalition ``carrier``.

    Players are renumbered in increasing original order; the mapping comes
    back alongside the game so allocations can be translated.
    """
    if carrier == 0:
        raise ValueError("the carrier coalition must be nonempty")
    players = members(carrier)
    t = len(players)
    vals = []
    for sub in range(1 << t):
        orig = 0
        for j in bits(sub):
            orig |= 1 << players[j]
        vals.append(v.values[orig])
    return Subgame(TuGame(t, tuple(vals)), players)
