"""Acceptance criteria AC1-AC11, each at its stated tolerance.

Run under pytest (one test per sub-check, with a PASS/FAIL line per
criterion in the terminal summary) or directly::

    python tests/test_acceptance.py
"""
import itertools
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from npcspace import frechet, vistal  # noqa: E402
from npcspace.core import is_flag, square  # noqa: E402
from npcspace.flow import enumerate_refinements, graph_from_squares  # noqa: E402
from npcspace.generate import random_scaffold  # noqa: E402
from npcspace.geodesic import gtp_support  # noqa: E402
from npcspace.instances import (CROSSING_TABLE, LAYERED_WITNESS, crossing_pair, layered_instance,  # noqa: E402
                                t5_configuration, three_orthant_points, three_orthant_space)
from npcspace.spacefile import parse_spacefile  # noqa: E402

from checks import PROPERTIES, sturm_distance_table  # noqa: E402

STICKY = ((3, 10), (3, 3), (10, 3))


def _coords_below(p, bound):
    return all(abs(float(v)) < bound for v in p.coords.values())


# AC1-AC3: the crossing pair

def ac1_distance():
    _, X, T = crossing_pair()
    d = gtp_support(X, T).distance
    assert abs(d - 15 * math.sqrt(2)) <= 1e-9 * 15 * math.sqrt(2), d
    return f"d = {d!r}"


def ac1_runtime():
    _, X, T = crossing_pair()
    times = []
    for _ in range(200):
        t = time.perf_counter()
        gtp_support(X, T).distance
        times.append(time.perf_counter() - t)
    med = float(np.median(times))
    assert med < 1e-3, med
    return f"median {med * 1e3:.3f} ms"


def ac2_table():
    _, X, T = crossing_pair()
    g = gtp_support(X, T)
    worst = 0.0
    for i, row in enumerate(CROSSING_TABLE):
        p = g.point_at(i / 6)
        worst = max(worst, max(abs(float(p[f"e{k + 1}"]) - row[k]) for k in range(6)))
    assert worst <= 1e-9, worst
    return f"max error {worst:.1e}"


def ac3_support():
    _, X, T = crossing_pair()
    A, B = gtp_support(X, T).support.as_lists()
    assert A == [{"e2", "e3"}, {"e1"}] and B == [{"e6"}, {"e4", "e5"}], (A, B)
    return "A=({e2,e3},{e1}) B=({e6},{e4,e5})"


# AC4-AC7: means in the three-orthant space

def ac4_sturm():
    space = three_orthant_space()
    res = frechet.sturm_mean(three_orthant_points(space, *STICKY), frechet.SturmParams(K=100_000, eps=1e-3, seed=0))
    assert _coords_below(res.mean, 1e-3), res.mean
    return f"sturm mean {res.mean} after {res.iterations} iterations"


def ac4_descent():
    space = three_orthant_space()
    res = frechet.descent_mean(three_orthant_points(space, *STICKY))
    assert _coords_below(res.mean, 1e-3), res.mean
    return f"descent mean {res.mean}"


def ac4_stickiness():
    """Every coordinate of every sample point perturbed by +-0.9 at once (all 64 sign patterns)."""
    space = three_orthant_space()
    moved = []
    for signs in itertools.product((-0.9, 0.9), repeat=6):
        pts = [(STICKY[i][0] + signs[2 * i], STICKY[i][1] + signs[2 * i + 1]) for i in range(3)]
        m = frechet.descent_mean(three_orthant_points(space, *pts)).mean
        if not _coords_below(m, 1e-3):
            moved.append((signs, m))
    assert not moved, f"{len(moved)}/64 perturbations move the mean off the origin, e.g. {moved[0]}"
    return "all 64 perturbations stay at the origin"


def ac5_inductive():
    space = three_orthant_space()
    T1, T2, T3 = three_orthant_points(space, *STICKY)
    got = []
    for order, axes, want in (((T1, T3, T2), ("e1", "e2p"), (1, 1)), ((T3, T1, T2), ("e1", "e2p"), (1, 1)),
                              ((T1, T2, T3), ("e1p", "e2p"), (0.390, 0.117)),
                              ((T2, T1, T3), ("e1p", "e2p"), (0.390, 0.117)),
                              ((T2, T3, T1), ("e1", "e2"), (0.117, 0.390)),
                              ((T3, T2, T1), ("e1", "e2"), (0.117, 0.390))):
        m = frechet.inductive_mean(list(order))
        assert m.support == set(axes), m
        vals = tuple(float(m[a]) for a in axes)
        assert all(abs(v - w) <= 1e-3 for v, w in zip(vals, want)), (vals, want)
        got.append(vals)
    return "; ".join(f"({a:.3f},{b:.3f})" for a, b in got[::2])


def ac6_centroid():
    space = three_orthant_space()
    pts = three_orthant_points(space, (2, 4), (2, 2), (4, 2))
    c = frechet.bhv_centroid(pts, tol=1e-6)
    assert any(float(v) > 1e-3 for v in c.coords.values()), c
    m = frechet.descent_mean(pts).mean
    assert _coords_below(m, 1e-3), m
    return f"centroid {c}, mean {m}"


def ac7_mrc():
    space = three_orthant_space()
    pts = three_orthant_points(space, (1, 1), (1, 1), (5, 6))
    mrc = frechet.mrc_tree(pts)
    assert mrc.support == pts[1].support, mrc
    m = frechet.descent_mean(pts).mean
    assert m.support == pts[2].support, m
    assert abs(float(m["e1p"]) - 1) <= 1e-3 and abs(float(m["e2p"]) - 2) <= 1e-3, m
    return f"MRC {mrc}, mean {m}"


# AC8: property suite

def ac8_properties():
    per = 70
    t = time.perf_counter()
    for name, check in PROPERTIES.items():
        for seed in range(per):
            try:
                check(10_000 + seed)
            except AssertionError as e:
                raise AssertionError(f"{name}, seed {10_000 + seed}: {e}") from None
    elapsed = time.perf_counter() - t
    assert elapsed < 60, elapsed
    return f"{per * len(PROPERTIES)} instances over {len(PROPERTIES)} properties in {elapsed:.1f} s"


# AC9: vistal suite

def ac9_t5_coverage():
    space, orthant, T = t5_configuration()
    facets = vistal.enumerate_facets(T, orthant)
    rng = np.random.default_rng(2024)
    interior = boundary = 0
    for _ in range(1000):
        xi = {a: Fraction(int(rng.integers(1, 10 ** 6)), 10 ** 6) for a in orthant}
        verdicts = [vistal.cell_membership(xi, c) for c in facets]
        n_int = verdicts.count(vistal.INTERIOR)
        assert n_int == 1 or (n_int == 0 and verdicts.count(vistal.BOUNDARY) >= 2), verdicts
        interior += n_int
        boundary += n_int == 0
        assert vistal.cell_membership(xi, vistal.facet_of(xi, T)) != vistal.OUTSIDE
    return f"{len(facets)} facets; {interior} interior, {boundary} on shared boundaries"


def _layered_p3_values():
    inst = layered_instance()
    w = LAYERED_WITNESS
    I1, J1 = ["x4", "x5", "x6"], ["t2", "t3", "t4", "t5"]
    I2, J2 = ["x7", "x8"], ["t6", "t7"]
    left = sum(w[a] for a in I1) / sum(inst.t_sq[b] for b in J1)
    right = sum(w[a] for a in I2) / sum(inst.t_sq[b] for b in J2)
    return left, right


def ac9_p3_value():
    left, right = _layered_p3_values()
    assert (left, right) == (Fraction(79, 66), Fraction(5, 12)) and left > right, \
        f"evaluates {left} > {right}, not 79/66 > 5/12"
    return "79/66 > 5/12"


def ac9_refinements():
    inst = layered_instance()
    g = graph_from_squares(inst.xs, [inst.x_sq[a] for a in inst.xs], inst.ts, [inst.t_sq[b] for b in inst.ts],
                           inst.space.compatible)
    n = len(enumerate_refinements(g))
    assert n == 12, n
    return "12 refinements"


# AC10: flag check

def ac10_flag():
    tri = parse_spacefile("axes: a b c\nedge: a b\nedge: b c\nedge: a c\nface: a b\nface: b c\nface: a c\n")
    assert not tri.is_flag()
    rng = np.random.default_rng(10)
    for _ in range(100):
        g = random_scaffold(int(rng.integers(3, 9)), rng, p=float(rng.uniform(0.2, 0.9)))
        cliques = [set(c) for c in nx.find_cliques(g.graph())]
        assert is_flag(cliques, g.axes)
        text = "axes: " + " ".join(g.axes) + "\n" + "".join(f"face: {' '.join(sorted(c))}\n" for c in cliques)
        assert parse_spacefile(text).is_flag()
    return "triangle rejected, 100 clique complexes accepted"


# AC11: Sturm rate

def ac11_rate():
    D = sturm_distance_table()
    med = np.median(D, axis=0)
    ratio = med[2] / med[4]  # k = 1000 over k = 4000
    assert ratio >= 1.5, ratio
    return f"median d at k=1000 / k=4000 = {ratio:.2f}"


CRITERIA = {
    "AC1": [ac1_distance, ac1_runtime],
    "AC2": [ac2_table],
    "AC3": [ac3_support],
    "AC4": [ac4_sturm, ac4_descent, ac4_stickiness],
    "AC5": [ac5_inductive],
    "AC6": [ac6_centroid],
    "AC7": [ac7_mrc],
    "AC8": [ac8_properties],
    "AC9": [ac9_t5_coverage, ac9_p3_value, ac9_refinements],
    "AC10": [ac10_flag],
    "AC11": [ac11_rate],
}

RESULTS: dict = {}  # criterion -> {check name: (ok, detail)}


def run_check(criterion, check):
    try:
        detail = check()
        ok = True
    except AssertionError as e:
        detail, ok = str(e).splitlines()[0] if str(e) else "assertion failed", False
    RESULTS.setdefault(criterion, {})[check.__name__] = (ok, detail)
    return ok, detail


def summary_lines():
    lines = []
    for crit in CRITERIA:
        if crit not in RESULTS:
            continue
        parts = RESULTS[crit]
        ok = all(v[0] for v in parts.values())
        detail = "; ".join(f"{name}: {'ok' if o else 'FAILED'} ({d})" for name, (o, d) in parts.items())
        lines.append(f"{crit} {'PASS' if ok else 'FAIL'}  {detail}")
    return lines


@pytest.mark.parametrize("criterion,check", [(c, f) for c, fs in CRITERIA.items() for f in fs],
                         ids=[f"{c}-{f.__name__}" for c, fs in CRITERIA.items() for f in fs])
def test_criterion(criterion, check):
    ok, detail = run_check(criterion, check)
    assert ok, detail


if __name__ == "__main__":
    for crit, checks in CRITERIA.items():
        for check in checks:
            run_check(crit, check)
        print(summary_lines()[-1], flush=True)
    sys.exit(0 if all(o for parts in RESULTS.values() for o, _ in parts.values()) else 1)
