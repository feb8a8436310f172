#!/usr/bin/env python3
"""Sampled preservation scan over priority-decreasing trees.

Draws random labeled trees with priorities decreasing away from the root,
evaluates the star-chain characterization, then cross-checks each verdict:
a failing chain must be falsified by the seeded counterexample search, and a
passing chain must survive randomized fuzzing (a smoke test; random trials
corroborate but cannot prove preservation).

Usage: python3 scripts/tree_chain_scan.py [--samples 2000] [--max-n 7]
"""

import argparse
import random
import time
from fractions import Fraction

from coopgames import WeightSystem, graph_from_edges, hierarchy_characterization, search_counterexample
from coopgames.counterexamples import preservation_fuzz


def random_priority_tree(rng, n, max_levels):
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    g = graph_from_edges(n, edges)
    prios = [0] * n
    prios[0] = rng.randint(1, max_levels)
    for i in range(1, n):
        parent = next(a for a, b in edges if b == i)
        prios[i] = rng.randint(1, prios[parent])
    present = sorted(set(prios))
    remap = {p: k + 1 for k, p in enumerate(present)}
    prios = [remap[p] for p in prios]
    blocks = [sum(1 << i for i, p in enumerate(prios) if p == lvl) for lvl in sorted(set(prios))]
    weights = tuple(Fraction(rng.randint(1, 4), rng.randint(1, 2)) for _ in range(n))
    return g, WeightSystem(n, weights, tuple(blocks))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--max-n", type=int, default=7)
    ap.add_argument("--max-levels", type=int, default=3)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1729)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    start = time.monotonic()
    chain_true = chain_false = unfalsified = dirty = 0
    seen = set()
    drawn = 0
    while drawn < args.samples:
        n = rng.randint(2, args.max_n)
        g, ws = random_priority_tree(rng, n, args.max_levels)
        key = (n, tuple(sorted(g.edges)), ws.partition, ws.weights)
        if key in seen:
            continue
        seen.add(key)
        drawn += 1
        ok, _ = hierarchy_characterization(g, ws)
        if ok:
            chain_true += 1
            if preservation_fuzz(g, ws, trials=args.trials, seed=args.seed) is not None:
                dirty += 1
                print(f"  FUZZ VIOLATION on chain-positive tree {sorted(g.edges)} {ws.partition}")
        else:
            chain_false += 1
            if search_counterexample(g, ws, budget=0, seed=args.seed) is None:
                unfalsified += 1
                print(f"  NO BUNDLE for chain-negative tree {sorted(g.edges)} {ws.partition}")
    status = "ok" if not (unfalsified or dirty) else "PROBLEMS"
    print(
        f"{drawn} trees: {chain_true} chain-positive (fuzz clean), "
        f"{chain_false} chain-negative (all falsified) [{status}] "
        f"({time.monotonic() - start:.1f}s)"
    )


if __name__ == "__main__":
    main()
