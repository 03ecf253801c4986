"""Random trees, spaces and points for tests and experiments."""
from __future__ import annotations

import itertools

import numpy as np

from .core import Point, ScaffoldGraph, TreeSpace, canonical_split


def random_topology(n: int, rng: np.random.Generator) -> list:
    """Splits of a uniform random binary tree on leaves 0..n, by random leaf insertion."""
    # Edges as (child cluster) sets relative to leaf 0; start with the 3-leaf star.
    clusters = [frozenset([1]), frozenset([2]), frozenset([1, 2])]
    for leaf in range(3, n + 1):
        target = clusters[rng.integers(len(clusters))]
        # Subdividing the edge above ``target`` gives cluster ``target + leaf``;
        # every cluster containing ``target`` strictly also gains the leaf.
        new = []
        for c in clusters:
            new.append(c | {leaf} if target < c else c)
        new.append(target | {leaf})
        new.append(frozenset([leaf]))
        clusters = new
    return [canonical_split(c, n) for c in clusters]


def random_tree(space: TreeSpace, rng: np.random.Generator, pendant: bool = True, internal_p: float = 1.0,
                low: float = 0.1, high: float = 2.0) -> Point:
    """Random binary tree; each internal edge is kept with probability ``internal_p``."""
    coords = {}
    for s in random_topology(space.n, rng):
        if s.is_pendant:
            if pendant:
                coords[s] = float(rng.uniform(low, high))
        elif rng.random() < internal_p:
            coords[s] = float(rng.uniform(low, high))
    return Point(space, coords)


def random_scaffold(n_axes: int, rng: np.random.Generator, p: float = 0.5, signed: bool = False) -> ScaffoldGraph:
    axes = [f"a{i}" for i in range(n_axes)]
    edges = [(a, b) for a, b in itertools.combinations(axes, 2) if rng.random() < p]
    return ScaffoldGraph(axes, edges, signed=signed)


def random_clique(space: ScaffoldGraph, rng: np.random.Generator, maximal: bool = True) -> list:
    order = list(space.axes)
    rng.shuffle(order)
    face = []
    for a in order:
        if all(space.compatible(a, b) for b in face):
            face.append(a)
            if not maximal and rng.random() < 0.3:
                break
    return face


def random_point(space, rng: np.random.Generator, maximal: bool = True, low: float = 0.1, high: float = 2.0) -> Point:
    if isinstance(space, TreeSpace):
        return random_tree(space, rng, internal_p=1.0 if maximal else 0.6, low=low, high=high)
    face = random_clique(space, rng, maximal)
    coords = {a: float(rng.uniform(low, high)) for a in face}
    if space.signed:
        coords = {a: v * (1 if rng.random() < 0.5 else -1) for a, v in coords.items()}
    return Point(space, coords)
