"""Small fixed configurations used by tests, scripts and the README."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import Point, ScaffoldGraph, TreeSpace, canonical_split


def crossing_pair():
    """Two points on three axes each whose only cross-compatible pairs are e1-e6, e2-e5, e3-e4.

    The geodesic between them has distance 15*sqrt(2) and the minimal support
    ``({e2,e3}, {e1}) / ({e6}, {e4,e5})``.
    """
    xs, ts = ["e1", "e2", "e3"], ["e4", "e5", "e6"]
    edges = list(itertools.combinations(xs, 2)) + list(itertools.combinations(ts, 2))
    edges += [("e1", "e6"), ("e2", "e5"), ("e3", "e4")]
    space = ScaffoldGraph(xs + ts, edges)
    X = Point(space, {"e1": 10, "e2": 4, "e3": 3})
    T = Point(space, {"e4": 4, "e5": 3, "e6": 10})
    return space, X, T


# Expected coordinates (e1..e6) along the crossing-pair geodesic at lambda = i/6.
CROSSING_TABLE = [
    (10, 4, 3, 0, 0, 0),
    (7.5, 2, 1.5, 0, 0, 0),
    (5, 0, 0, 0, 0, 0),
    (2.5, 0, 0, 0, 0, 2.5),
    (0, 0, 0, 0, 0, 5),
    (0, 0, 0, 2, 1.5, 7.5),
    (0, 0, 0, 4, 3, 10),
]


def three_orthant_space() -> ScaffoldGraph:
    """Three quadrants glued in a chain: {e1,e2}, {e1,e2p}, {e1p,e2p}."""
    return ScaffoldGraph(["e1", "e2", "e1p", "e2p"], [("e1", "e2"), ("e1", "e2p"), ("e1p", "e2p")])


def three_orthant_points(space: ScaffoldGraph, a, b, c) -> list[Point]:
    """Points written as (first, second) coordinate pairs in each of the three quadrants."""
    return [
        Point(space, {"e1": a[0], "e2": a[1]}),
        Point(space, {"e1": b[0], "e2p": b[1]}),
        Point(space, {"e1p": c[0], "e2p": c[1]}),
    ]


@dataclass
class LayeredInstance:
    """A bipartite incompatibility instance with four residual groups.

    Groups U = {x1..x3, t1}, V = {x4..x6, t2..t5}, X = {x7, t6}, W = {x8, t7};
    squared weights on the t side are 9, 9, 1, 1, 1, 1, 1 (group sums 9, 12, 1, 1).
    """

    space: ScaffoldGraph
    xs: list
    ts: list
    x_sq: dict
    t_sq: dict

    @property
    def target(self) -> Point:
        return Point(self.space, {b: {9: 3}.get(v, 1) for b, v in self.t_sq.items()})

    @property
    def source(self) -> Point:
        import math

        return Point(self.space, {a: math.sqrt(v) for a, v in self.x_sq.items()})


LAYERED_EDGES = {
    ("x1", "t1"), ("x2", "t1"), ("x3", "t1"), ("x1", "t2"),
    ("x4", "t2"), ("x5", "t2"), ("x6", "t2"), ("x5", "t4"), ("x6", "t3"), ("x6", "t5"),
    ("x4", "t6"), ("x5", "t6"), ("x7", "t6"), ("x6", "t7"), ("x8", "t7"),
}

# Lemma-style witness weights on the cell ({x1..x3},{t1}) < ({x4..x8},{t2..t7});
# the first block is scaled down so that the ratio inequality is strict.
LAYERED_WITNESS = {
    "x1": Fraction(2), "x2": Fraction(2), "x3": Fraction(2),
    "x4": Fraction(10, 3), "x5": Fraction(13, 3), "x6": Fraction(11, 2),
    "x7": Fraction(1, 3), "x8": Fraction(1, 2),
}


def layered_instance() -> LayeredInstance:
    xs = [f"x{i}" for i in range(1, 9)]
    ts = [f"t{i}" for i in range(1, 8)]
    edges = list(itertools.combinations(xs, 2)) + list(itertools.combinations(ts, 2))
    edges += [(a, b) for a in xs for b in ts if (a, b) not in LAYERED_EDGES]
    space = ScaffoldGraph(xs + ts, edges)
    x_sq = dict(zip(xs, map(Fraction, [3, 3, 3, 3, 4, 5, 1, 1])))
    t_sq = dict(zip(ts, map(Fraction, [9, 9, 1, 1, 1, 1, 1])))
    return LayeredInstance(space, xs, ts, x_sq, t_sq)


def t5_configuration():
    """Six-leaf trees (n = 5) with disjoint internal splits and t1 = t2 = t3 = 1.

    X has internal splits {1,2}, {3,4}, {1,2,5}; the source T has {4,5},
    {3,4,5}, {2,3,4,5}.  Returns ``(space, orthant, T)`` where the orthant is
    X's three internal splits.
    """
    space = TreeSpace(5)
    orthant = frozenset(canonical_split(s, 5) for s in ([1, 2], [3, 4], [1, 2, 5]))
    T = Point(space, {canonical_split(s, 5): 1 for s in ([4, 5], [3, 4, 5], [2, 3, 4, 5])})
    return space, orthant, T
