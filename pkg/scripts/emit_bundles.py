#!/usr/bin/env python3
"""Write the three counterexample bundle files for a given weight system.

Each bundle is re-verified before writing: the base game passes the full
weighted average-convexity scan and its restriction breaks the inequality
at the recorded witness pair.

Usage: python3 scripts/emit_bundles.py [--weights w.json] [--out-dir bundles]
"""

import argparse
import pathlib

from coopgames import fourpath_bundle, noncomplete_cycle_bundle, threepan_bundle, uniform_system, verify_bundle
from coopgames.serialize import bundle_to_dict, dump_json, load_json, weights_from_dict


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--weights", help="weight-system JSON (default: unit weights on 4 players)")
    ap.add_argument("--out-dir", default="bundles")
    args = ap.parse_args()

    ws = weights_from_dict(load_json(args.weights)) if args.weights else uniform_system(4)
    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    bundles = {}
    try:
        bundles["threepan"] = threepan_bundle(ws)
    except ValueError as exc:
        print(f"threepan: skipped ({exc})")
    try:
        bundles["fourpath"] = fourpath_bundle(ws)
    except ValueError as exc:
        print(f"fourpath: skipped ({exc})")
    try:
        bundles["cycle"] = noncomplete_cycle_bundle(list(range(ws.n)), [], _top_node(ws), ws)
    except ValueError as exc:
        print(f"cycle: skipped ({exc})")

    for name, bundle in bundles.items():
        result = verify_bundle(bundle)
        if not result:
            raise SystemExit(f"{name}: bundle failed verification: {result.failure}")
        path = out_dir / f"{name}.json"
        dump_json(bundle_to_dict(bundle), str(path))
        print(f"{name}: wrote {path} (violation {result.lhs} > {result.rhs})")


def _top_node(ws):
    top = ws.top_set(ws.full)
    return (top & -top).bit_length() - 1


if __name__ == "__main__":
    main()
