import random
from dataclasses import replace
from fractions import Fraction

import pytest

from coopgames import (
    check_weighted_average_convexity,
    complete_graph,
    convexity_sides,
    cycle_graph,
    fourpath_bundle,
    graph_from_edges,
    is_convex,
    make_game,
    noncomplete_cycle_bundle,
    path_graph,
    random_wac_game,
    restricted_game,
    search_counterexample,
    simple_system,
    star_graph,
    threepan_bundle,
    uniform_system,
    verify_bundle,
)
from conftest import pm, priority_system, random_weight_system

F = Fraction

# priority vectors (p1, p2, p3, p4) admissible for the pan construction,
# split by the value the level flag must take
PAN_CONFIGS_FLAG0 = [(1, 1, 1, 1), (1, 2, 1, 1), (1, 2, 2, 2), (1, 3, 2, 2)]
PAN_CONFIGS_FLAG1 = [(1, 2, 1, 2), (2, 2, 1, 2)]
PATH_CONFIGS_STRICT = [(1, 2, 1, 2), (1, 3, 2, 3), (2, 3, 1, 3)]


def random_positive_weights(rng):
    return [F(rng.randint(1, 6), rng.randint(1, 3)) for _ in range(4)]


def sides(game, ws, s_players, t_players):
    return convexity_sides(game, ws, pm(*s_players), pm(*t_players))


def assert_monotone(game):
    for mask in range(1 << game.n):
        for i in range(game.n):
            if not mask & (1 << i):
                assert game.values[mask | (1 << i)] >= game.values[mask]


class TestThreePanBundle:
    def test_unit_weights_reference_values(self):
        bundle = threepan_bundle(uniform_system(4))
        assert bundle.params["pair14"] == 2
        assert bundle.params["pair34"] == 2
        assert bundle.params["triple234"] == F(17, 3)
        assert bundle.params["grand"] == F(20, 3)
        assert bundle.params["level_flag"] == 0
        result = verify_bundle(bundle)
        assert result and (result.lhs, result.rhs) == (F(17), F(16))
        assert (bundle.witness_s, bundle.witness_t) == (pm(2, 3, 4), pm(1, 2, 3, 4))

    def test_uneven_weights(self):
        bundle = threepan_bundle(simple_system([1, 2, 1, 3]))
        assert bundle.params["pair14"] == F(5, 3)
        assert bundle.params["pair34"] == F(4, 3)
        assert verify_bundle(bundle)

    def test_flag_branch_collapses_the_top_formula(self):
        bundle = threepan_bundle(priority_system([1, 2, 1, 2]))
        assert bundle.params["level_flag"] == 1
        assert bundle.params["triple234"] == bundle.params["pair14"] + 2 * bundle.params["pair34"]
        assert verify_bundle(bundle)

    def test_wing_swap_when_the_other_wing_dominates(self):
        # priorities put player 1 above player 4; the roles flip internally
        bundle = threepan_bundle(priority_system([2, 2, 1, 1]))
        assert verify_bundle(bundle)
        assert bundle.witness_s == pm(1, 2, 3)

    def test_rejects_bad_priorities(self):
        with pytest.raises(ValueError):
            threepan_bundle(priority_system([1, 1, 2, 1]))  # pendant on top

    def test_rejects_wrong_player_count(self):
        with pytest.raises(ValueError):
            threepan_bundle(uniform_system(5))

    def test_relabeling_moves_the_whole_construction(self):
        bundle = threepan_bundle(uniform_system(4), relabel=(3, 2, 1, 0))
        assert bundle.graph.has_edge(2, 1) and bundle.graph.has_edge(2, 3)
        assert bundle.witness_s == pm(1, 2, 3)  # players 2, 3, 4 in new labels
        assert verify_bundle(bundle)

    def test_relabeling_rejects_duplicates(self):
        with pytest.raises(ValueError):
            threepan_bundle(uniform_system(4), relabel=(0, 0, 1, 2))

    def test_random_admissible_weights_all_verify(self, rng):
        for config in PAN_CONFIGS_FLAG0 + PAN_CONFIGS_FLAG1:
            for _ in range(5):
                ws = priority_system(config, random_positive_weights(rng))
                assert verify_bundle(threepan_bundle(ws))

    def test_single_level_lattice_tables_entry_for_entry(self):
        # base game and its restriction, rebuilt by hand at unit weights
        bundle = threepan_bundle(uniform_system(4))
        x, y, z, theta = F(2), F(2), F(17, 3), F(20, 3)
        base = make_game(
            4,
            {
                pm(1, 4): x,
                pm(1, 2, 4): x,
                pm(3, 4): y,
                pm(1, 3, 4): x + y - 1,
                pm(2, 3, 4): z,
                pm(1, 2, 3, 4): theta,
            },
        )
        communication = make_game(
            4,
            {
                pm(1, 4): x,
                pm(1, 2, 4): x,
                pm(1, 3, 4): x,
                pm(2, 3, 4): z,
                pm(1, 2, 3, 4): theta,
            },
        )
        assert bundle.game == base
        assert restricted_game(bundle.game, bundle.graph) == communication


class TestFourPathBundle:
    def test_strict_priorities_use_the_zero_one_game(self):
        ws = priority_system([1, 2, 1, 2], [1, 2, 3, 4])
        bundle = fourpath_bundle(ws)
        assert bundle.family == "fourpath"
        assert set(bundle.graph.edges) == {(0, 3), (1, 3), (1, 2)}
        ones = {pm(1, 4), pm(3, 4), pm(1, 2, 4), pm(1, 3, 4), pm(2, 3, 4), pm(1, 2, 3, 4)}
        for mask in range(16):
            assert bundle.game.values[mask] == (1 if mask in ones else 0)
        result = verify_bundle(bundle)
        assert result
        restricted = restricted_game(bundle.game, bundle.graph)
        lhs, rhs = convexity_sides(restricted, ws, bundle.witness_s, bundle.witness_t)
        assert lhs == ws.weights[1] + ws.weights[3] and rhs == ws.weights[3]

    def test_uniform_priorities_transfer_the_pan_game(self):
        bundle = fourpath_bundle(uniform_system(4))
        assert bundle.family == "fourpath-pan"
        assert bundle.params["level_flag"] == 0
        assert verify_bundle(bundle)

    def test_one_dominant_inner_node_dispatches_to_the_pan_game(self):
        bundle = fourpath_bundle(priority_system([1, 2, 1, 1]))
        assert bundle.family == "fourpath-pan"
        assert verify_bundle(bundle)

    def test_reversed_dominant_inner_node(self):
        bundle = fourpath_bundle(priority_system([1, 1, 1, 2]))
        assert verify_bundle(bundle)

    def test_equal_levels_with_a_dominant_first_end(self):
        bundle = fourpath_bundle(priority_system([2, 2, 1, 2]))
        assert verify_bundle(bundle)

    def test_rejects_dominant_end_nodes(self):
        with pytest.raises(ValueError):
            fourpath_bundle(priority_system([2, 1, 1, 1]))

    def test_relabeled_path_still_verifies(self):
        ws = priority_system([2, 1, 2, 1])
        bundle = fourpath_bundle(ws, relabel=(1, 0, 3, 2))
        assert verify_bundle(bundle)


class TestCycleBundle:
    def test_square_with_unit_weights(self):
        ws = uniform_system(4)
        bundle = noncomplete_cycle_bundle([0, 1, 2, 3], [], 0, ws)
        result = verify_bundle(bundle)
        assert result and result.lhs - result.rhs == 1 == bundle.params["defect"]

    def test_five_cycle_with_chord_and_priorities(self):
        # chord away from the pivot's neighbors; pivot carries the top level
        ws = priority_system([2, 1, 1, 1, 1], [1, 2, 1, 2, 1])
        bundle = noncomplete_cycle_bundle([0, 1, 2, 3, 4], [(1, 3)], 0, ws)
        result = verify_bundle(bundle)
        assert result and result.lhs - result.rhs == ws.weights[0]

    def test_rejects_chord_between_the_pivot_neighbors(self):
        with pytest.raises(ValueError):
            noncomplete_cycle_bundle([0, 1, 2, 3], [(1, 3)], 0, uniform_system(4))

    def test_rejects_low_priority_pivot(self):
        ws = priority_system([1, 2, 1, 2])
        with pytest.raises(ValueError):
            noncomplete_cycle_bundle([0, 1, 2, 3], [], 0, ws)

    def test_rejects_complete_cycle(self):
        with pytest.raises(ValueError):
            noncomplete_cycle_bundle([0, 1, 2], [], 0, uniform_system(3))


class TestVerifyBundle:
    def test_lowered_triple_value_kills_the_violation(self):
        bundle = threepan_bundle(uniform_system(4))
        worse = list(bundle.game.values)
        worse[pm(2, 3, 4)] -= 1
        tampered = replace(bundle, game=make_game(4, dict(enumerate(worse))))
        result = verify_bundle(tampered)
        assert not result and "satisfies the inequality" in result.failure

    def test_raised_triple_value_breaks_the_base_game(self):
        bundle = threepan_bundle(uniform_system(4))
        worse = list(bundle.game.values)
        worse[pm(2, 3, 4)] += 1
        tampered = replace(bundle, game=make_game(4, dict(enumerate(worse))))
        result = verify_bundle(tampered)
        assert not result and result.failure == "base game is not weighted average-convex"

    def test_complete_graph_substitution_kills_the_violation(self):
        bundle = threepan_bundle(uniform_system(4))
        tampered = replace(bundle, graph=complete_graph(4))
        result = verify_bundle(tampered)
        assert not result and "satisfies the inequality" in result.failure

    def test_bad_witness_nesting_rejected(self):
        bundle = threepan_bundle(uniform_system(4))
        assert not verify_bundle(replace(bundle, witness_s=pm(1), witness_t=pm(2, 3)))


class TestRandomGenerator:
    def test_always_convex(self, rng):
        for _ in range(40):
            n = rng.randint(1, 6)
            assert is_convex(random_wac_game(n, uniform_system(n), rng.randrange(1 << 30)))

    def test_weighted_average_convex_for_any_system(self, rng):
        for _ in range(30):
            n = rng.randint(2, 5)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            ws = random_weight_system(rng, n)
            assert check_weighted_average_convexity(v, ws).holds

    def test_deterministic_in_the_seed(self):
        ws = uniform_system(5)
        assert random_wac_game(5, ws, 424242) == random_wac_game(5, ws, 424242)


class TestSearch:
    def test_path_graph_yields_a_bundle(self):
        bundle = search_counterexample(path_graph([0, 1, 2, 3]), uniform_system(4), budget=0, seed=1)
        assert bundle is not None and verify_bundle(bundle)

    def test_star_graph_exhausts_the_budget(self):
        assert search_counterexample(star_graph(5, 0), uniform_system(5), budget=40, seed=2) is None

    def test_reference_tree_b_yields_a_bundle(self):
        g = graph_from_edges(9, [(0, 2), (1, 2), (2, 3), (3, 4), (2, 6), (5, 6), (6, 7), (6, 8)])
        ws = priority_system([3, 3, 3, 3, 2, 1, 1, 1, 1])
        bundle = search_counterexample(g, ws, budget=0, seed=3)
        assert bundle is not None and verify_bundle(bundle)

    def test_square_yields_the_cycle_family(self):
        bundle = search_counterexample(cycle_graph([0, 1, 2, 3]), uniform_system(4), budget=0, seed=4)
        assert bundle is not None and bundle.family == "cycle" and verify_bundle(bundle)


PAN_ZERO_S = [(1,), (2,), (3,), (4,), (1, 2), (1, 3), (2, 3)]
PAN_CASES = {
    (1, 4): [(1, 2, 4), (1, 3, 4), (1, 2, 3, 4)],
    (2, 4): [(1, 2, 4), (2, 3, 4), (1, 2, 3, 4)],
    (3, 4): [(1, 3, 4), (2, 3, 4), (1, 2, 3, 4)],
    (1, 2, 3): [(1, 2, 3, 4)],
    (1, 2, 4): [(1, 2, 3, 4)],
    (1, 3, 4): [(1, 2, 3, 4)],
    (2, 3, 4): [(1, 2, 3, 4)],
}

PATH_ZERO_S = [(1,), (2,), (3,), (4,), (1, 2), (1, 3), (2, 3), (2, 4), (1, 2, 3)]
PATH_PAIR_CASES = {
    (1, 4): [(1, 2, 4), (1, 3, 4), (1, 2, 3, 4)],
    (3, 4): [(1, 3, 4), (2, 3, 4), (1, 2, 3, 4)],
}
PATH_TRIPLE_CASES = [(1, 2, 4), (1, 3, 4), (2, 3, 4)]


def _assert_zero_value_cases(game, ws, zero_list):
    for s in zero_list:
        assert game.values[pm(*s)] == 0
        for t_mask in range(1, 16):
            if t_mask != pm(*s) and t_mask & pm(*s) == pm(*s):
                lhs, rhs = convexity_sides(game, ws, pm(*s), t_mask)
                assert lhs == 0 <= rhs


def check_pan_case_table(ws):
    """Every nested pair of the pan-family base game, case by case.

    Zero-worth coalitions are covered by monotonicity; the remaining pairs
    are asserted individually, including the two cases that come out tight.
    """
    bundle = threepan_bundle(ws)
    game = bundle.game
    flag = bundle.params["level_flag"]
    assert_monotone(game)
    _assert_zero_value_cases(game, ws, PAN_ZERO_S)
    for s, ts in PAN_CASES.items():
        for t in ts:
            lhs, rhs = sides(game, ws, s, t)
            assert lhs <= rhs, (s, t)
    if flag == 0:
        lhs, rhs = sides(game, ws, (1, 4), (1, 2, 4))
        assert lhs == rhs
    if flag == 1:
        lhs, rhs = sides(game, ws, (2, 3, 4), (1, 2, 3, 4))
        assert lhs == rhs
    assert check_weighted_average_convexity(game, ws).holds
    return bundle


def check_path_case_table(ws):
    """Every nested pair of the 0/1 path-family base game, case by case."""
    bundle = fourpath_bundle(ws)
    assert bundle.family == "fourpath"
    game = bundle.game
    assert_monotone(game)
    _assert_zero_value_cases(game, ws, PATH_ZERO_S)
    w4 = ws.weights[3]
    for s, ts in PATH_PAIR_CASES.items():
        for t in ts:
            lhs, rhs = sides(game, ws, s, t)
            assert lhs == rhs == w4, (s, t)
    for s in PATH_TRIPLE_CASES:
        lhs, rhs = sides(game, ws, s, (1, 2, 3, 4))
        assert lhs == rhs == w4, s
    assert check_weighted_average_convexity(game, ws).holds
    return bundle


class TestPanCaseTable:
    """The single-level configuration exercises the flag-0 branch of the table."""

    @pytest.mark.parametrize("config", PAN_CONFIGS_FLAG0 + PAN_CONFIGS_FLAG1)
    def test_case_table(self, config, rng):
        for _ in range(10):
            check_pan_case_table(priority_system(config, random_positive_weights(rng)))


class TestPathCaseTable:
    @pytest.mark.parametrize("config", PATH_CONFIGS_STRICT)
    def test_case_table(self, config, rng):
        for _ in range(10):
            check_path_case_table(priority_system(config, random_positive_weights(rng)))
