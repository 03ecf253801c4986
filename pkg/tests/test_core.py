import itertools
from fractions import Fraction

import networkx as nx
import pytest

from npcspace.core import (Point, ScaffoldGraph, TreeSpace, canonical_split, is_flag, orthant_of, splits_compatible,
                           square, tree_scaffold, unsquare)
from npcspace.errors import InvalidSplit, InvalidSquaredCoordinate, LeafCountMismatch, NegativeLength, NotAFace, UnknownAxis
from npcspace.generate import random_point, random_scaffold, random_topology
from npcspace.instances import crossing_pair


def test_canonical_split_complements_the_side_with_zero():
    assert canonical_split({0, 1}, 4).side == frozenset({2, 3, 4})
    assert canonical_split({2, 3, 4}, 4).side == frozenset({2, 3, 4})


@pytest.mark.parametrize("subset", [{0, 1, 2, 3, 4}, set(), {5}])
def test_canonical_split_rejects_improper_input(subset):
    with pytest.raises(InvalidSplit):
        canonical_split(subset, 4)


def test_canonical_split_idempotent():
    for k in range(1, 6):
        for sub in itertools.combinations(range(6), k):
            s = canonical_split(sub, 5)
            assert canonical_split(s.side, 5) == s


def test_compatibility_examples():
    a, b, c = canonical_split({2, 3}, 4), canonical_split({4}, 4), canonical_split({3, 4}, 4)
    assert splits_compatible(a, b)
    assert not splits_compatible(a, c)
    assert not splits_compatible(a, a)
    with pytest.raises(LeafCountMismatch):
        splits_compatible(a, canonical_split({2, 3}, 5))


def test_compatibility_symmetric_sweep():
    for n in range(3, 7):
        splits = tree_scaffold(n).axes
        for a, b in itertools.combinations(splits, 2):
            assert splits_compatible(a, b) == splits_compatible(b, a)


def test_pendant_splits_compatible_with_everything():
    space = tree_scaffold(5)
    for p in (s for s in space.axes if s.is_pendant):
        assert all(space.compatible(p, s) for s in space.axes if s != p)


def test_tree_scaffold_counts():
    space = tree_scaffold(4)
    nontrivial = [s for s in space.axes if 2 <= len(s.side) <= 3]
    assert len(nontrivial) == 10
    assert len(tree_scaffold(2).axes) == 3


@pytest.mark.parametrize("n", [3, 4, 5])
def test_maximal_cliques_of_tree_space_have_2n_minus_1_axes(n):
    cliques = tree_scaffold(n).maximal_cliques()
    assert cliques and all(len(c) == 2 * n - 1 for c in cliques)


def test_random_topologies_are_maximal(rng):
    for n in range(3, 8):
        splits = random_topology(n, rng)
        assert len(set(splits)) == 2 * n - 1
        assert all(splits_compatible(a, b) for a, b in itertools.combinations(splits, 2))


def test_is_flag_examples():
    assert not is_flag([{1, 2}, {1, 3}, {2, 3}])
    assert is_flag([{1, 2, 3}])
    with pytest.raises(UnknownAxis):
        is_flag([{1, 2}], axes=[1])


def test_clique_complexes_are_flag(rng):
    for _ in range(20):
        g = random_scaffold(7, rng, p=0.5)
        faces = [set(c) for c in nx.enumerate_all_cliques(g.graph())]
        assert is_flag(faces, g.axes)


def test_orthant_of_examples():
    space, X, _ = crossing_pair()
    assert orthant_of(Point(space, {})) == frozenset()
    assert orthant_of(X) == {"e1", "e2", "e3"}
    with pytest.raises(NotAFace):
        Point(space, {"e1": 1, "e4": 1})


def test_orthant_of_random_points_is_a_clique(rng):
    for _ in range(50):
        space = random_scaffold(8, rng)
        p = random_point(space, rng, maximal=False)
        o = list(orthant_of(p))
        assert all(space.compatible(a, b) for a, b in itertools.combinations(o, 2))


def test_point_validation():
    space = ScaffoldGraph(["a", "b"], [("a", "b")])
    with pytest.raises(NegativeLength):
        Point(space, {"a": -1})
    with pytest.raises(UnknownAxis):
        Point(space, {"z": 1})
    assert Point(space, {"a": 0, "b": 2}).support == {"b"}
    signed = ScaffoldGraph(["a"], signed=True)
    assert Point(signed, {"a": -2})["a"] == -2


def test_square_unsquare_round_trip(rng):
    space = TreeSpace(5)
    for _ in range(20):
        p = random_point(space, rng)
        q = unsquare(square(p))
        assert all(abs(float(q[a]) - float(v)) < 1e-12 for a, v in p.coords.items())
    s = ScaffoldGraph(["e"])
    assert square(Point(s, {"e": 3})).coords == {"e": 9}
    assert unsquare(Point(s, {"e": Fraction(9, 4)}, validate=False))["e"] == Fraction(3, 2)
    with pytest.raises(InvalidSquaredCoordinate):
        unsquare({"e": -1}, s)
