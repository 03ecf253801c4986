import math
import time

import numpy as np
import pytest

from npcspace.core import Point, ScaffoldGraph, TreeSpace
from npcspace.errors import NegativeLength, OutOfRange, PointsInDifferentSpaces
from npcspace.generate import random_point
from npcspace.geodesic import (INFINITE_RATIO, NEGATIVE_COMMON, POSITIVE, ZERO_RATIO, distance, distance_matrix,
                               gtp_support, path_length, point_at, verify_support)
from npcspace.instances import CROSSING_TABLE, crossing_pair

AXES = ["e1", "e2", "e3", "e4", "e5", "e6"]


def _coords(p):
    return tuple(float(p[a]) for a in AXES)


def test_crossing_distance_and_support():
    space, X, T = crossing_pair()
    g = gtp_support(X, T)
    assert math.isclose(g.distance, 15 * math.sqrt(2), rel_tol=1e-12)
    assert g.pairs == [({"e2", "e3"}, {"e6"}), ({"e1"}, {"e4", "e5"})]
    assert g.ratios == pytest.approx([0.5, 2.0])


def test_crossing_is_fast():
    _, X, T = crossing_pair()
    gtp_support(X, T)
    t = time.perf_counter()
    for _ in range(100):
        gtp_support(X, T).distance
    assert (time.perf_counter() - t) / 100 < 1e-3


@pytest.mark.parametrize("i", range(7))
def test_crossing_table_rows(i):
    _, X, T = crossing_pair()
    assert _coords(point_at(X, T, i / 6)) == pytest.approx(CROSSING_TABLE[i], abs=1e-9)


def test_endpoints_are_exact_and_lambda_checked():
    _, X, T = crossing_pair()
    assert point_at(X, T, 0) == X and point_at(X, T, 1) == T
    with pytest.raises(OutOfRange):
        point_at(X, T, 1.5)


def test_identical_and_same_orthant_points():
    space = TreeSpace(4)
    rng = np.random.default_rng(0)
    X = random_point(space, rng)
    g = gtp_support(X, X)
    assert g.pairs == [] and g.distance == 0
    Y = Point(space, {a: float(v) + 1 for a, v in X.coords.items()})
    assert gtp_support(X, Y).pairs == []
    assert distance(X, Y) == pytest.approx(math.sqrt(len(X.coords)))


def test_origin_distance_is_norm():
    _, X, T = crossing_pair()
    O = Point(X.space, {})
    assert distance(O, T) == pytest.approx(T.norm())


def test_support_classification():
    edges = [("c", "x"), ("c", "t"), ("c", "u"), ("c", "v"), ("x", "u"), ("x", "t"), ("x", "v"), ("t", "v"), ("t", "u")]
    space = ScaffoldGraph(["c", "x", "t", "u", "v"], edges)
    X = Point(space, {"c": 1, "x": 2, "u": 1})
    T = Point(space, {"c": 3, "t": 1, "v": 1})
    kinds = {p.kind for p in gtp_support(X, T).support.pairs}
    # x is compatible with all of T, t with all of X; only u and v are incompatible.
    assert kinds == {NEGATIVE_COMMON, ZERO_RATIO, INFINITE_RATIO, POSITIVE}


def test_different_spaces_rejected():
    a = Point(TreeSpace(4), {})
    b = Point(TreeSpace(5), {})
    with pytest.raises(PointsInDifferentSpaces):
        distance(a, b)


def test_verify_support():
    _, X, T = crossing_pair()
    assert verify_support(X, T, gtp_support(X, T).support).valid
    swapped = verify_support(X, T, [({"e1"}, {"e4", "e5"}), ({"e2", "e3"}, {"e6"})])
    assert not swapped.valid and "P2" in swapped.violated
    # The first failure in property order is (P1); the swapped order also breaks compatibility.
    assert swapped.first == "P1"
    single = verify_support(X, T, [({"e1", "e2", "e3"}, {"e4", "e5", "e6"})])
    assert single.violated == ("P3",)


def test_signed_space():
    space = ScaffoldGraph(["a", "b"], [("a", "b")], signed=True)
    assert distance(Point(space, {"a": -2}), Point(space, {"a": 3})) == pytest.approx(5)
    assert distance(Point(space, {"a": -2}), Point(space, {"b": 1})) == pytest.approx(math.sqrt(5))
    with pytest.raises(NegativeLength):
        Point(ScaffoldGraph(["a"]), {"a": -2})


def test_minimal_ratios_strictly_increase(rng):
    space = TreeSpace(6)
    for _ in range(100):
        g = gtp_support(random_point(space, rng), random_point(space, rng))
        r = g.exact_sq_ratios
        assert all(a < b for a, b in zip(r, r[1:]))
        assert verify_support(g.source, g.target, g.support).valid


def test_distance_matches_path_length_and_cone_bound(rng):
    space = TreeSpace(5)
    for _ in range(50):
        X, T = random_point(space, rng), random_point(space, rng)
        g = gtp_support(X, T)
        assert g.distance == pytest.approx(path_length(X, T, g.pairs), rel=1e-12)
        assert g.distance <= X.norm() + T.norm() + 1e-12


def test_leg_boundaries_are_continuous():
    _, X, T = crossing_pair()
    g = gtp_support(X, T)
    # Boundaries at lambda / (1 - lambda) = ratio.
    for r in g.ratios:
        lam = r / (1 + r)
        p, q = g.point_at(lam - 1e-9), g.point_at(lam + 1e-9)
        assert distance(p, q) == pytest.approx(2e-9 * g.distance, rel=1e-3)


def test_distance_matrix_symmetric(rng):
    space = TreeSpace(4)
    pts = [random_point(space, rng) for _ in range(5)]
    m = distance_matrix(pts)
    assert np.allclose(m, m.T) and np.all(np.diag(m) == 0)
