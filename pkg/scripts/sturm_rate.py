"""Distance from Sturm iterates to the (origin) mean of the three-orthant sample, over many seeds."""
import argparse
import csv
import sys

import numpy as np

from npcspace import frechet
from npcspace.instances import three_orthant_points, three_orthant_space


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--ks", type=int, nargs="+", default=[250, 500, 1000, 2000, 4000, 8000])
    ap.add_argument("--csv", help="also write per-seed distances here")
    args = ap.parse_args()
    ks = sorted(args.ks)
    space = three_orthant_space()
    sample = frechet.WeightedSample(three_orthant_points(space, (3, 10), (3, 3), (10, 3)))
    D = np.zeros((args.seeds, len(ks)))
    for s in range(args.seeds):
        for k, mu in frechet.sturm_iterates(sample, s):
            if k in ks:
                D[s, ks.index(k)] = mu.norm()
            if k >= ks[-1]:
                break
    mean, med = D.mean(axis=0), np.median(D, axis=0)
    print("k       mean d    median d  mean ratio to previous k")
    for i, k in enumerate(ks):
        ratio = "" if i == 0 else f"{mean[i] / mean[i - 1]:.3f}"
        print(f"{k:<7} {mean[i]:.5f}   {med[i]:.5f}   {ratio}")
    if args.csv:
        with open(args.csv, "w", newline="") if args.csv != "-" else sys.stdout as fh:
            w = csv.writer(fh)
            w.writerow(["seed"] + ks)
            for s in range(args.seeds):
                w.writerow([s] + [f"{v:.8g}" for v in D[s]])


if __name__ == "__main__":
    main()
