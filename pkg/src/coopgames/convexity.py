"""Weighted average-convexity, core membership, and related inequality scans.

The central check compares, for every nested pair S inside T, the effective-
weighted sum of marginal contributions of S's members at S against the same
sum taken at T. Pairs whose S misses T's top priority class contribute only
zero weights and are skipped. Scans run on integer-scaled copies of the data
(exact; scaling never flips an inequality) and violations are reported with
both sides recomputed as exact rationals.
"""

from dataclasses import dataclass
from fractions import Fraction

from .games import TuGame, int_values
from .masks import bits, submasks
from .weights import WeightSystem, int_weights, uniform_system


@dataclass(frozen=True)
class Violation:
    s: int
    t: int
    lhs: Fraction  # weighted marginal sum of S's members at S
    rhs: Fraction  # the same sum taken at T; a violation has lhs > rhs


@dataclass(frozen=True)
class ConvexityReport:
    holds: bool
    violations: tuple[Violation, ...]

    def __bool__(self) -> bool:
        return self.holds


def convexity_sides(v: TuGame, ws: WeightSystem, s: int, t: int) -> tuple[Fraction, Fraction]:
    """Exact (lhs, rhs) of the average-convexity inequality for S inside T."""
    top = ws.top_set(t)
    vals = v.values
    lhs = Fraction(0)
    rhs = Fraction(0)
    for i in bits(s & top):
        bit = 1 << i
        w = ws.weights[i]
        lhs += w * (vals[s] - vals[s ^ bit])
        rhs += w * (vals[t] - vals[t ^ bit])
    return lhs, rhs


def check_weighted_average_convexity(
    v: TuGame, ws: WeightSystem, collect_all: bool = False, scan_mask: int | None = None
) -> ConvexityReport:
    """Scan every nested pair of coalitions for the weighted inequality.

    With ``collect_all`` false the scan stops at the first offending pair,
    which is the lexicographically smallest (T, S) by mask. ``scan_mask``
    restricts both coalitions to a ground subset (used by the null-player
    reduction); by default everything is scanned.
    """
    if v.n != ws.n:
        raise ValueError(f"game has {v.n} players but weight system has {ws.n}")
    vals = int_values(v)
    w = int_weights(ws)
    ground = v.full if scan_mask is None else scan_mask
    violations: list[Violation] = []
    for t in range(3, ground + 1):
        if t & ~ground or t.bit_count() < 2:
            continue
        top = ws.top_set(t)
        vt = vals[t]
        marg = {}
        for i in bits(top):
            marg[i] = w[i] * (vt - vals[t ^ (1 << i)])
        found_here = []
        for s in submasks(t):
            if s == t:
                continue
            if s == 0:
                break
            stop = s & top
            if not stop:
                continue  # S misses T's priority: satisfied by any game
            vs = vals[s]
            total = 0
            for i in bits(stop):
                total += marg[i] - w[i] * (vs - vals[s ^ (1 << i)])
            if total < 0:
                found_here.append(s)
        if found_here:
            for s in sorted(found_here):
                lhs, rhs = convexity_sides(v, ws, s, t)
                violations.append(Violation(s, t, lhs, rhs))
                if not collect_all:
                    return ConvexityReport(False, tuple(violations))
    return ConvexityReport(not violations, tuple(violations))


def check_average_convexity(v: TuGame, collect_all: bool = False) -> ConvexityReport:
    """The unweighted special case: unit weights, one priority class."""
    return check_weighted_average_convexity(v, uniform_system(v.n), collect_all)


def check_with_null_player_reduction(v: TuGame, ws: WeightSystem, collect_all: bool = False) -> ConvexityReport:
    """Same verdict as the full check, scanning only null-player-free pairs.

    Null players contribute nothing to either side, and a pair whose T gains
    priority only through null players is vacuous, so restricting both
    coalitions to the null-free ground set loses no violations.
    """
    from .games import null_players

    ground = v.full ^ null_players(v)
    if ground == 0:
        return ConvexityReport(True, ())
    return check_weighted_average_convexity(v, ws, collect_all, scan_mask=ground)


def core_contains(v: TuGame, allocation) -> bool:
    """Exact efficiency plus coalitional rationality for every coalition."""
    x = tuple(Fraction(a) for a in allocation)
    if len(x) != v.n:
        raise ValueError("allocation length must match the player count")
    sums = [Fraction(0)] * (1 << v.n)
    for mask in range(1, 1 << v.n):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + x[low.bit_length() - 1]
    if sums[v.full] != v.values[v.full]:
        return False
    return all(sums[mask] >= v.values[mask] for mask in range(1, v.full))


@dataclass(frozen=True)
class TripleViolation:
    s: int
    t: int
    u: int
    lhs: Fraction  # v(S|T) - v(T)
    rhs: Fraction  # v(S|U) - v(U); a violation has lhs < rhs


@dataclass(frozen=True)
class TripleReport:
    holds: bool
    violations: tuple[TripleViolation, ...]

    def __bool__(self) -> bool:
        return self.holds


WEAK_SUPERADD_LIMIT = 12  # the triple scan is O(4^n)


def weak_superadditivity_holds(v: TuGame, ws: WeightSystem, collect_all: bool = False) -> TripleReport:
    """Gains from joining T dominate gains from joining any U inside T.

    Scanned over disjoint S, T with U inside T, under the priority guard that
    every member of S strictly dominates U and weakly dominates T. Taking a
    single priority class and U empty, this is plain superadditivity.
    """
    if v.n != ws.n:
        raise ValueError(f"game has {v.n} players but weight system has {ws.n}")
    if v.n > WEAK_SUPERADD_LIMIT:
        raise ValueError(f"triple scan is limited to n <= {WEAK_SUPERADD_LIMIT}")
    vals = int_values(v)
    violations: list[TripleViolation] = []
    for s in range(1, v.full + 1):
        min_prio = min(ws.priorities[i] for i in bits(s))
        for t in submasks(v.full ^ s):
            if t and min_prio < ws.priority_of(t):
                continue
            vst = vals[s | t]
            vt = vals[t]
            for u in submasks(t):
                if u and min_prio <= ws.priority_of(u):
                    continue
                if vst - vt < vals[s | u] - vals[u]:
                    lhs = v.values[s | t] - v.values[t]
                    rhs = v.values[s | u] - v.values[u]
                    violations.append(TripleViolation(s, t, u, lhs, rhs))
                    if not collect_all:
                        return TripleReport(False, tuple(violations))
                if u == 0:
                    break
            if t == 0:
                break
    return TripleReport(not violations, tuple(violations))


@dataclass(frozen=True)
class CoreMembershipReport:
    is_wac: bool
    phi: tuple[Fraction, ...]
    in_core: bool


def core_membership_pipeline(v: TuGame, ws: WeightSystem) -> CoreMembershipReport:
    """Check weighted average-convexity, compute the value, test the core.

    When the game is weighted average-convex the value must land in the core;
    the report states both facts independently and never claims the converse.
    """
    from .shapley import weighted_shapley_dividends

    report = check_weighted_average_convexity(v, ws)
    phi = weighted_shapley_dividends(v, ws)
    return CoreMembershipReport(report.holds, phi, core_contains(v, phi))
