"""Vistal facets of a three-axis orthant of six-leaf tree space, with a Monte Carlo coverage check."""
import argparse
import json
from fractions import Fraction

import numpy as np

from npcspace import vistal
from npcspace.instances import t5_configuration


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="dump the facets as JSON")
    args = ap.parse_args()
    space, orthant, T = t5_configuration()
    facets = vistal.enumerate_facets(T, orthant)
    if args.json:
        print(json.dumps([c.to_json() for c in facets], indent=1))
        return
    def names(axes):
        return ["{" + space.axis_name(a) + "}" for a in axes]

    print("source:", T)
    print("orthant:", sorted(space.axis_name(a) for a in orthant))
    for i, c in enumerate(facets):
        pairs = " ".join("(" + " ".join(sorted(names(A))) + " | " + " ".join(sorted(names(B))) + ")" for A, B in c.pairs)
        print(f"facet {i}: {pairs}  rows={len(c.rows)}  dim={vistal.cell_dimension(c)}")
    rng = np.random.default_rng(args.seed)
    counts = np.zeros(len(facets), dtype=int)
    shared = 0
    for _ in range(args.samples):
        xi = {a: Fraction(int(rng.integers(1, 10 ** 6)), 10 ** 6) for a in orthant}
        verdicts = [vistal.cell_membership(xi, c) for c in facets]
        if vistal.INTERIOR in verdicts:
            counts[verdicts.index(vistal.INTERIOR)] += 1
        else:
            shared += 1
    print("interior hits per facet:", counts.tolist(), " on shared boundaries:", shared)


if __name__ == "__main__":
    main()
