"""Exact-arithmetic toolkit for cooperative games with weights and graphs.

Computes classical and weighted Shapley values four independent ways,
verifies (weighted) average-convexity and core membership, builds
graph-restricted communication games, characterizes the graphs that
preserve weighted average-convexity, and constructs self-verifying
counterexample bundles for the graphs that do not.
"""

from .convexity import (
    ConvexityReport,
    CoreMembershipReport,
    TripleReport,
    Violation,
    check_average_convexity,
    check_weighted_average_convexity,
    check_with_null_player_reduction,
    convexity_sides,
    core_contains,
    core_membership_pipeline,
    weak_superadditivity_holds,
)
from .counterexamples import (
    CounterexampleBundle,
    FuzzHit,
    fourpath_bundle,
    noncomplete_cycle_bundle,
    preservation_fuzz,
    random_wac_game,
    search_counterexample,
    threepan_bundle,
    verify_bundle,
)
from .games import (
    TuGame,
    delta,
    game_from_coefficients,
    is_convex,
    is_superadditive,
    make_game,
    null_players,
    subgame,
    unanimity_coefficients,
    unanimity_game,
)
from .graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    graph_from_edges,
    induced_components,
    path_graph,
    restricted_game,
    star_graph,
)
from .masks import coalition, members
from .shapley import (
    marginal_coefficient,
    order_distribution,
    shapley,
    weighted_myerson,
    weighted_shapley_dividends,
    weighted_shapley_marginals,
    weighted_shapley_orders,
    weighted_shapley_recursive,
)
from .structure import (
    classify_component,
    find_induced_3pan,
    find_induced_4path,
    hierarchy_characterization,
    is_cycle_complete,
    is_priority_decreasing_tree,
    layer_subgraph,
    necessary_conditions,
    singleton_characterization,
)
from .weights import WeightSystem, restrict_system, simple_system, uniform_system

__all__ = [name for name in dir() if not name.startswith("_")]
