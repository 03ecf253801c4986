"""Means of the three-orthant sample, and how far its mean stays at the origin under perturbation.

The perturbation scan moves every coordinate by +-delta at once (all 64 sign
patterns), and separately one coordinate at a time, and reports how many
perturbed samples still have their mean at the origin.
"""
import argparse
import itertools

from npcspace import frechet
from npcspace.instances import three_orthant_points, three_orthant_space

BASE = ((3, 10), (3, 3), (10, 3))


def at_origin(p, tol):
    return all(abs(float(v)) < tol for v in p.coords.values())


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--deltas", type=float, nargs="+", default=[0.1, 0.3, 0.5, 0.9])
    ap.add_argument("--tol", type=float, default=1e-4)
    ap.add_argument("--K", type=int, default=100_000)
    args = ap.parse_args()
    space = three_orthant_space()
    pts = three_orthant_points(space, *BASE)
    print("descent:  ", frechet.descent_mean(pts).mean)
    print("sturm:    ", frechet.sturm_mean(pts, frechet.SturmParams(K=args.K, eps=1e-3)).mean)
    print("centroid: ", frechet.bhv_centroid(pts))
    print("mrc:      ", frechet.mrc_tree(pts))
    for order in itertools.permutations(range(3)):
        label = ",".join(f"T{i + 1}" for i in order)
        print(f"inductive ({label}):", frechet.inductive_mean([pts[i] for i in order]))
    print()
    print("delta  all-coordinates  one-coordinate")
    for d in args.deltas:
        simul = 0
        for s in itertools.product((-d, d), repeat=6):
            moved = [(BASE[i][0] + s[2 * i], BASE[i][1] + s[2 * i + 1]) for i in range(3)]
            simul += at_origin(frechet.descent_mean(three_orthant_points(space, *moved)).mean, args.tol)
        single = 0
        for i, c, sign in itertools.product(range(3), range(2), (-1, 1)):
            moved = [list(p) for p in BASE]
            moved[i][c] += sign * d
            single += at_origin(frechet.descent_mean(three_orthant_points(space, *moved)).mean, args.tol)
        print(f"{d:<5}  {simul:>2}/64            {single:>2}/12")


if __name__ == "__main__":
    main()
