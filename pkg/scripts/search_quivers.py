"""Scan small monomial quiver algebras for idempotent ideals that are not strongly idempotent."""

import argparse
import json

from workbench.fd import search_non_strongly_idempotent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--vertices", type=int, default=2)
    ap.add_argument("--arrows", type=int, default=3)
    ap.add_argument("--relation-degree", type=int, default=2)
    ap.add_argument("--bound", type=int, default=4, help="Tor degree bound")
    ap.add_argument("--first", action="store_true", help="stop at the first hit")
    args = ap.parse_args()
    hits = 0
    for hit in search_non_strongly_idempotent(args.p, args.vertices, args.arrows, args.relation_degree, args.bound):
        print(json.dumps(hit, sort_keys=True))
        hits += 1
        if args.first:
            break
    print(f"{hits} hit(s)")


if __name__ == "__main__":
    main()
