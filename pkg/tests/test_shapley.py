import random
from fractions import Fraction
from itertools import permutations

import pytest

from coopgames import (
    WeightSystem,
    complete_graph,
    graph_from_edges,
    make_game,
    marginal_coefficient,
    null_players,
    order_distribution,
    path_graph,
    restrict_system,
    shapley,
    simple_system,
    subgame,
    unanimity_game,
    uniform_system,
    weighted_myerson,
    weighted_shapley_dividends,
    weighted_shapley_marginals,
    weighted_shapley_orders,
    weighted_shapley_recursive,
)
from coopgames.shapley import psi_table, subgame_value
from conftest import pm, random_weight_system, size_minus_one_game
from coopgames.counterexamples import random_wac_game

F = Fraction


def brute_force_value(v, ws):
    """Order-sum oracle written independently of the library's order module."""
    out = [F(0)] * v.n
    layers = [sorted(i for i in range(v.n) if ws.priorities[i] == k) for k in range(ws.m, 0, -1)]
    for perm_layers in _layered_orders(layers):
        prob = F(1)
        order = []
        for layer_perm, layer in zip(perm_layers, layers):
            remaining = sum(ws.weights[i] for i in layer)
            for i in layer_perm:
                prob *= ws.weights[i] / remaining
                remaining -= ws.weights[i]
            order.extend(layer_perm)
        tail = 0
        for i in reversed(order):
            out[i] += prob * (v.values[tail | (1 << i)] - v.values[tail])
            tail |= 1 << i
    return tuple(out)


def _layered_orders(layers):
    if not layers:
        yield ()
        return
    for head in permutations(layers[0]):
        for rest in _layered_orders(layers[1:]):
            yield (head,) + rest


class TestClassical:
    def test_unanimity_pair(self):
        assert shapley(unanimity_game(3, pm(1, 2))) == (F(1, 2), F(1, 2), F(0))

    def test_size_minus_one_splits_evenly(self):
        assert shapley(size_minus_one_game(3)) == (F(2, 3),) * 3

    def test_zero_game(self):
        assert shapley(make_game(3, {})) == (F(0),) * 3


class TestDividends:
    def test_unanimity_with_weights(self):
        ws = simple_system([2, 1, 5])
        v = unanimity_game(3, pm(1, 2))
        assert weighted_shapley_dividends(v, ws) == (F(2, 3), F(1, 3), F(0))

    def test_low_priority_contributor_gets_nothing(self):
        ws = WeightSystem(3, (F(7), F(2), F(3)), (pm(3), pm(1, 2)))
        v = unanimity_game(3, pm(1, 3))
        assert weighted_shapley_dividends(v, ws) == (F(1), F(0), F(0))

    def test_uniform_simple_system_reduces_to_classical(self, rng):
        for _ in range(20):
            n = rng.randint(1, 5)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            assert weighted_shapley_dividends(v, uniform_system(n)) == shapley(v)


class TestOrderDistribution:
    def test_two_players_simple(self):
        dist = dict(order_distribution(simple_system([1, 3])))
        assert dist == {(0, 1): F(1, 4), (1, 0): F(3, 4)}

    def test_priority_forces_the_order(self):
        ws = WeightSystem(2, (F(1), F(1)), (pm(2), pm(1)))
        assert order_distribution(ws) == [((0, 1), F(1))]

    def test_probabilities_sum_to_one(self, rng):
        for _ in range(25):
            ws = random_weight_system(rng, rng.randint(1, 5))
            entries = order_distribution(ws)
            assert sum(p for _, p in entries) == 1
            assert all(p > 0 for _, p in entries)

    def test_support_is_priority_sorted(self, rng):
        for _ in range(25):
            ws = random_weight_system(rng, rng.randint(2, 5))
            for order, _ in order_distribution(ws):
                prios = [ws.priorities[i] for i in order]
                assert prios == sorted(prios, reverse=True)

    def test_enumeration_limit(self):
        with pytest.raises(ValueError):
            order_distribution(uniform_system(10))


class TestOrders:
    def test_unanimity_two_players(self):
        ws = simple_system([1, 3])
        v = unanimity_game(2, pm(1, 2))
        assert weighted_shapley_orders(v, ws) == (F(1, 4), F(3, 4))

    def test_uniform_reduces_to_classical(self, rng):
        for _ in range(15):
            n = rng.randint(1, 5)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            assert weighted_shapley_orders(v, uniform_system(n)) == shapley(v)

    def test_agreement_with_dividends(self, rng):
        for _ in range(100):
            n = rng.randint(1, 5)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            ws = random_weight_system(rng, n)
            assert weighted_shapley_orders(v, ws) == weighted_shapley_dividends(v, ws)


class TestRecursive:
    def test_single_player_base_case(self):
        v = make_game(1, {pm(1): F(7, 3)})
        assert weighted_shapley_recursive(v, uniform_system(1)) == (F(7, 3),)

    def test_singleton_rows_are_own_values(self, rng):
        v = size_minus_one_game(3)
        table = psi_table(v, uniform_system(3))
        for i in range(3):
            assert table[1 << i][i] == v.values[1 << i]

    def test_agreement_with_dividends(self, rng):
        for _ in range(100):
            n = rng.randint(1, 6)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            ws = random_weight_system(rng, n)
            assert weighted_shapley_recursive(v, ws) == weighted_shapley_dividends(v, ws)

    def test_rows_match_subgame_values(self, rng):
        for _ in range(25):
            n = rng.randint(2, 5)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            ws = random_weight_system(rng, n)
            table = psi_table(v, ws)
            carrier = rng.randint(1, v.full)
            sub, players = subgame(v, carrier)
            expected = weighted_shapley_dividends(sub, restrict_system(ws, carrier))
            assert tuple(table[carrier][p] for p in players) == expected
            assert subgame_value(v, ws, carrier) == tuple(
                expected[players.index(i)] if i in players else F(0) for i in range(n)
            )


class TestMarginalCoefficients:
    def test_full_coalition_is_weight_share(self, rng):
        for _ in range(20):
            ws = random_weight_system(rng, rng.randint(1, 5))
            full = (1 << ws.n) - 1
            top = ws.top_set(full)
            for i in range(ws.n):
                expected = ws.weights[i] / ws.effective_total(full) if top & (1 << i) else F(0)
                assert marginal_coefficient(ws, full, i) == expected

    def test_low_priority_members_get_zero(self):
        ws = WeightSystem(3, (F(1), F(1), F(1)), (pm(3), pm(1, 2)))
        assert marginal_coefficient(ws, pm(1, 3), 2) == 0

    def test_outsider_rejected(self):
        with pytest.raises(ValueError):
            marginal_coefficient(uniform_system(3), pm(1, 2), 2)

    def test_recursion_over_ground_sets(self, rng):
        # summing the coefficient over one-smaller ground sets reproduces it
        for _ in range(30):
            ws = random_weight_system(rng, rng.randint(2, 5))
            full = (1 << ws.n) - 1
            s = rng.randint(1, full - 1)
            t = full
            if s == t or not (s & ~t) == 0 or s == 0:
                continue
            top_s = ws.top_set(s)
            for i in range(ws.n):
                if not top_s & (1 << i):
                    continue
                total = F(0)
                wt = ws.effective_total(t)
                for j in range(ws.n):
                    if (t & ~s) & (1 << j):
                        total += (
                            ws.effective_weight(t, j)
                            / wt
                            * marginal_coefficient(ws, s, i, within=t ^ (1 << j))
                        )
                assert total == marginal_coefficient(ws, s, i, within=t)


class TestMarginalsRoute:
    def test_unanimity_two_players(self):
        ws = simple_system([1, 3])
        v = unanimity_game(2, pm(1, 2))
        assert weighted_shapley_marginals(v, ws) == (F(1, 4), F(3, 4))

    def test_zero_game(self):
        assert weighted_shapley_marginals(make_game(3, {}), uniform_system(3)) == (F(0),) * 3


class TestFourWayAgreement:
    def test_random_suite(self, rng):
        for _ in range(60):
            n = rng.randint(2, 5)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            ws = random_weight_system(rng, n)
            a = weighted_shapley_dividends(v, ws)
            assert a == weighted_shapley_orders(v, ws)
            assert a == weighted_shapley_recursive(v, ws)
            assert a == weighted_shapley_marginals(v, ws)
            assert a == brute_force_value(v, ws)
            assert sum(a) == v.values[v.full]

    def test_null_players_get_nothing(self, rng):
        for _ in range(30):
            n = rng.randint(2, 5)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            ws = random_weight_system(rng, n)
            phi = weighted_shapley_dividends(v, ws)
            for i in range(n):
                if null_players(v) & (1 << i):
                    assert phi[i] == 0

    def test_top_set_collapse(self, rng):
        # the unanimity games on a coalition and on its top set allocate alike
        for _ in range(40):
            ws = random_weight_system(rng, rng.randint(2, 5))
            base = rng.randint(1, (1 << ws.n) - 1)
            u_full = unanimity_game(ws.n, base)
            u_top = unanimity_game(ws.n, ws.top_set(base))
            assert weighted_shapley_dividends(u_full, ws) == weighted_shapley_dividends(u_top, ws)

    def test_weight_scaling_invariance(self, rng):
        for _ in range(20):
            n = rng.randint(2, 5)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            ws = random_weight_system(rng, n)
            scaled = WeightSystem(n, tuple(w * F(7, 3) for w in ws.weights), ws.partition)
            assert weighted_shapley_dividends(v, ws) == weighted_shapley_dividends(v, scaled)


class TestMyerson:
    def test_complete_graph_changes_nothing(self, rng):
        for _ in range(10):
            n = rng.randint(2, 5)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            ws = random_weight_system(rng, n)
            assert weighted_myerson(v, complete_graph(n), ws) == weighted_shapley_dividends(v, ws)

    def test_edgeless_graph_pays_standalone_values(self, rng):
        for _ in range(10):
            n = rng.randint(2, 5)
            v = random_wac_game(n, uniform_system(n), rng.randrange(1 << 30))
            ws = random_weight_system(rng, n)
            empty = graph_from_edges(n, [])
            assert weighted_myerson(v, empty, ws) == tuple(v.values[1 << i] for i in range(n))

    def test_path_with_size_minus_one(self):
        # frozen from the order-sum oracle: the middle player carries the links
        v = size_minus_one_game(3)
        g = path_graph([0, 1, 2])
        ws = uniform_system(3)
        expected = (F(1, 2), F(1), F(1, 2))
        assert weighted_myerson(v, g, ws) == expected
        from coopgames import restricted_game

        assert brute_force_value(restricted_game(v, g), ws) == expected
