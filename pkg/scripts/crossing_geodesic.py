"""Print the geodesic between the two crossing three-axis points at lambda = i/6."""
import argparse
import math

from npcspace.geodesic import gtp_support
from npcspace.instances import crossing_pair


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=6)
    args = ap.parse_args()
    _, X, T = crossing_pair()
    g = gtp_support(X, T)
    A, B = g.support.as_lists()
    print("support A:", [sorted(a) for a in A])
    print("support B:", [sorted(b) for b in B])
    print(f"distance: {g.distance:.12g} (15*sqrt(2) = {15 * math.sqrt(2):.12g})")
    axes = ["e1", "e2", "e3", "e4", "e5", "e6"]
    print("i  " + "  ".join(f"{a:>6}" for a in axes))
    for i in range(args.steps + 1):
        p = g.point_at(i / args.steps)
        print(f"{i:<2} " + "  ".join(f"{float(p[a]):6.3f}" for a in axes))


if __name__ == "__main__":
    main()
