#!/usr/bin/env python3
"""Exhaustive single-level preservation scan over small connected graphs.

For every connected graph up to --max-n nodes, compares the shape-based
characterization (every component complete or a star) against the pattern
predicate (cycle-complete, no induced 4-path, no induced 3-pan), then
falsifies every non-preserving graph with the seeded counterexample search
and fuzzes every preserving one.

Usage: python3 scripts/singleton_graph_scan.py [--max-n 6] [--trials 300]
"""

import argparse
import time
from itertools import combinations

from coopgames import (
    find_induced_3pan,
    find_induced_4path,
    graph_from_edges,
    is_cycle_complete,
    search_counterexample,
    singleton_characterization,
    uniform_system,
)
from coopgames.counterexamples import preservation_fuzz
from coopgames.graphs import is_connected


def connected_graphs(n):
    pairs = list(combinations(range(n), 2))
    for bitset in range(1 << len(pairs)):
        g = graph_from_edges(n, [pairs[i] for i in range(len(pairs)) if bitset >> i & 1])
        if is_connected(g):
            yield g


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--seed", type=int, default=1729)
    args = ap.parse_args()

    grand_start = time.monotonic()
    for n in range(1, args.max_n + 1):
        start = time.monotonic()
        total = preserved = falsified = mismatches = unfalsified = dirty = 0
        for g in connected_graphs(n):
            total += 1
            by_shape = singleton_characterization(g)
            by_patterns = (
                is_cycle_complete(g)[0]
                and find_induced_4path(g) is None
                and find_induced_3pan(g) is None
            )
            if by_shape != by_patterns:
                mismatches += 1
                print(f"  MISMATCH on {sorted(g.edges)}")
                continue
            ws = uniform_system(n)
            if by_shape:
                preserved += 1
                if preservation_fuzz(g, ws, trials=args.trials, seed=args.seed) is not None:
                    dirty += 1
                    print(f"  FUZZ VIOLATION on preserving graph {sorted(g.edges)}")
            else:
                if search_counterexample(g, ws, budget=0, seed=args.seed) is None:
                    unfalsified += 1
                    print(f"  NO BUNDLE for non-preserving graph {sorted(g.edges)}")
                else:
                    falsified += 1
        status = "ok" if not (mismatches or unfalsified or dirty) else "PROBLEMS"
        print(
            f"n={n}: {total} connected graphs, {preserved} preserving (fuzz clean), "
            f"{falsified} falsified [{status}] ({time.monotonic() - start:.1f}s)"
        )
    print(f"done in {time.monotonic() - grand_start:.1f}s")


if __name__ == "__main__":
    main()
