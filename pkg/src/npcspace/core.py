"""Splits, scaffold graphs, tree spaces and points.

Two kinds of space share one small protocol (``compatible``, ``check_axis``,
``is_maximal_face``, ``signed``):

* :class:`TreeSpace` -- BHV tree space on leaves ``0..n``; axes are
  :class:`Split` values, pendant splits included.
* :class:`ScaffoldGraph` -- a general NPC orthant space given by its axes and
  the pairwise-compatibility graph.  Orthants are the cliques.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Hashable, Iterable, Mapping

import networkx as nx

from .errors import (
    InvalidSplit,
    LeafCountMismatch,
    NegativeLength,
    NotAFace,
    NotFlag,
    PointsInDifferentSpaces,
    UnknownAxis,
)

Axis = Hashable


def exact(value) -> Fraction:
    """Exact rational value of a float, int, Fraction or decimal string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class Split:
    """A bipartition of ``{0..n}`` stored by the side not containing 0."""

    side: frozenset
    n: int
    mask: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "side", frozenset(self.side))
        if not self.side or 0 in self.side or not self.side <= set(range(1, self.n + 1)):
            raise InvalidSplit(f"not a canonical split side: {sorted(self.side)} (n={self.n})")
        object.__setattr__(self, "mask", sum(1 << i for i in self.side))

    def __hash__(self):
        return hash((self.mask, self.n))

    @property
    def is_pendant(self) -> bool:
        return len(self.side) == 1 or len(self.side) == self.n

    def complement(self) -> frozenset:
        return frozenset(range(self.n + 1)) - self.side

    def __str__(self):
        return ",".join(map(str, sorted(self.side)))

    def label(self, labels: tuple[str, ...] | None = None) -> str:
        if labels is None:
            return str(self)
        return ",".join(labels[i] for i in sorted(self.side))

    def __lt__(self, other: "Split"):
        return (len(self.side), sorted(self.side)) < (len(other.side), sorted(other.side))


def canonical_split(subset: Iterable[int], n: int) -> Split:
    s = frozenset(subset)
    full = frozenset(range(n + 1))
    if not s <= full:
        raise InvalidSplit(f"labels outside 0..{n}: {sorted(s - full)}")
    if not s or s == full:
        raise InvalidSplit("a split needs both sides nonempty")
    if 0 in s:
        s = full - s
    return Split(s, n)


def splits_compatible(a: Split, b: Split) -> bool:
    if a.n != b.n:
        raise LeafCountMismatch(f"splits on {a.n} and {b.n} leaves")
    if a.mask == b.mask:
        return False
    # Both complements contain 0, so only three of the four intersections can vanish.
    common = a.mask & b.mask
    return common == 0 or common == a.mask or common == b.mask


@dataclass(frozen=True)
class TreeSpace:
    """BHV tree space on leaves ``0..n``; ``labels[i]`` names leaf ``i``."""

    n: int
    labels: tuple[str, ...] | None = None
    signed = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("tree space needs n >= 2")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.n + 1:
                raise ValueError(f"expected {self.n + 1} labels, got {len(self.labels)}")

    def compatible(self, a: Split, b: Split) -> bool:
        return splits_compatible(a, b)

    def check_axis(self, a) -> None:
        if not isinstance(a, Split) or a.n != self.n:
            raise UnknownAxis(f"{a!r} is not a split on {self.n + 1} leaves")

    def is_maximal_face(self, face) -> bool:
        return len(face) == 2 * self.n - 1

    def split(self, *names) -> Split:
        """Split whose one side is the given leaf names (or indices)."""
        idx = [self.labels.index(x) if isinstance(x, str) else x for x in names]
        return canonical_split(idx, self.n)

    def axis_name(self, a: Split) -> str:
        return a.label(self.labels)


class ScaffoldGraph:
    """Axes plus a symmetric irreflexive compatibility relation."""

    def __init__(self, axes: Iterable[Axis], edges: Iterable[tuple[Axis, Axis]] = (), signed: bool = False):
        self.axes = tuple(axes)
        if len(set(self.axes)) != len(self.axes):
            raise ValueError("duplicate axis ids")
        self.signed = bool(signed)
        nbrs = {a: set() for a in self.axes}
        for a, b in edges:
            if a not in nbrs:
                raise UnknownAxis(f"unknown axis {a!r}")
            if b not in nbrs:
                raise UnknownAxis(f"unknown axis {b!r}")
            if a == b:
                raise ValueError(f"an axis is never compatible with itself: {a!r}")
            nbrs[a].add(b)
            nbrs[b].add(a)
        self._nbrs = {a: frozenset(s) for a, s in nbrs.items()}
        self._key = (frozenset(self.axes), frozenset(frozenset(e) for e in self.edges()), self.signed)

    def edges(self):
        seen = set()
        for a in self.axes:
            for b in self._nbrs[a]:
                if (b, a) not in seen:
                    seen.add((a, b))
                    yield a, b

    def neighbors(self, a) -> frozenset:
        return self._nbrs[a]

    def compatible(self, a, b) -> bool:
        return b in self._nbrs[a]

    def check_axis(self, a) -> None:
        if a not in self._nbrs:
            raise UnknownAxis(f"unknown axis {a!r}")

    def is_maximal_face(self, face) -> bool:
        face = set(face)
        if not face:
            return not any(self._nbrs.values()) and len(self.axes) <= 1
        common = set.intersection(*(set(self._nbrs[a]) for a in face))
        return not (common - face)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.axes)
        g.add_edges_from(self.edges())
        return g

    def maximal_cliques(self) -> list[frozenset]:
        return [frozenset(c) for c in nx.find_cliques(self.graph())]

    def __eq__(self, other):
        return isinstance(other, ScaffoldGraph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"ScaffoldGraph(axes={len(self.axes)}, edges={len(self._key[1])}, signed={self.signed})"

    @classmethod
    def from_faces(cls, faces: Iterable[Iterable[Axis]], axes: Iterable[Axis] | None = None, signed: bool = False):
        """Scaffold graph of a complex; raises :class:`NotFlag` if the complex is not flag."""
        faces = [frozenset(f) for f in faces]
        if axes is None:
            axes = sorted(set().union(*faces), key=str) if faces else []
        if not is_flag(faces, axes):
            raise NotFlag("complex is not flag, so the orthant space is not NPC")
        edges = {tuple(sorted(p, key=str)) for f in faces for p in itertools.combinations(f, 2)}
        return cls(axes, edges, signed=signed)


def tree_scaffold(n: int) -> ScaffoldGraph:
    """All splits of ``{0..n}`` (pendants included) with split compatibility."""
    if n < 2:
        raise ValueError("n >= 2 required")
    axes = [canonical_split(s, n) for k in range(1, n + 1) for s in itertools.combinations(range(1, n + 1), k)]
    edges = [(a, b) for a, b in itertools.combinations(axes, 2) if splits_compatible(a, b)]
    return ScaffoldGraph(axes, edges)


def is_flag(faces: Iterable[Iterable[Axis]], axes: Iterable[Axis] | None = None) -> bool:
    """True iff every clique of the complex's 1-skeleton is a face."""
    faces = [frozenset(f) for f in faces]
    known = set(axes) if axes is not None else set().union(*faces) if faces else set()
    g = nx.Graph()
    g.add_nodes_from(known)
    for f in faces:
        bad = f - known
        if bad:
            raise UnknownAxis(f"face references unknown axis {sorted(bad, key=str)[0]!r}")
        g.add_edges_from(itertools.combinations(f, 2))
    for clique in nx.find_cliques(g):
        c = frozenset(clique)
        if len(c) > 1 and not any(c <= f for f in faces):
            return False
    return True


class Point:
    """Sparse coordinates on the axes of a space; zero entries are dropped.

    Coordinates keep their input type (float, int or Fraction) so exact
    decimal input survives until a combinatorial decision needs it.
    """

    __slots__ = ("space", "coords")

    def __init__(self, space, coords: Mapping[Axis, Real] | None = None, *, validate: bool = True):
        coords = {a: v for a, v in (coords or {}).items() if v != 0}
        if validate:
            for a, v in coords.items():
                space.check_axis(a)
                if isinstance(v, float) and not math.isfinite(v):
                    raise ValueError(f"non-finite coordinate on {a!r}")
                if v < 0 and not space.signed:
                    raise NegativeLength(f"negative length {v} on {a!r} in an unsigned space")
            _check_clique(space, coords)
        self.space = space
        self.coords = coords

    def __getitem__(self, axis) -> Real:
        return self.coords.get(axis, 0)

    @property
    def support(self) -> frozenset:
        return frozenset(self.coords)

    def norm(self) -> float:
        return math.sqrt(math.fsum(float(v) ** 2 for v in self.coords.values()))

    def as_float(self) -> dict:
        return {a: float(v) for a, v in self.coords.items()}

    def __eq__(self, other):
        return isinstance(other, Point) and same_space(self.space, other.space) and self.coords == other.coords

    def __repr__(self):
        body = ", ".join(f"{a}: {float(v):.6g}" for a, v in sorted(self.coords.items(), key=lambda kv: str(kv[0])))
        return f"Point({{{body}}})"


def _check_clique(space, coords) -> None:
    axes = list(coords)
    for a, b in itertools.combinations(axes, 2):
        if not space.compatible(a, b):
            raise NotAFace(f"axes {a!r} and {b!r} are incompatible")


def orthant_of(p: Point | Mapping, space=None) -> frozenset:
    """Axes with nonzero coordinate; raises :class:`NotAFace` for non-cliques."""
    if isinstance(p, Point):
        coords, space = p.coords, p.space
    else:
        coords = {a: v for a, v in p.items() if v != 0}
    _check_clique(space, coords)
    return frozenset(coords)


def same_space(s1, s2) -> bool:
    return s1 is s2 or s1 == s2


def require_same_space(*points: Point) -> None:
    first = points[0].space
    for p in points[1:]:
        if not same_space(first, p.space):
            raise PointsInDifferentSpaces("points live in different spaces")


def square(p: Point) -> Point:
    """Coordinatewise square; the result lives on the same axes."""
    return Point(p.space, {a: v * v for a, v in p.coords.items()}, validate=False)


def unsquare(xi: Point | Mapping, space=None) -> Point:
    """Inverse of :func:`square` on nonnegative input."""
    from .errors import InvalidSquaredCoordinate

    if isinstance(xi, Point):
        coords, space = xi.coords, xi.space
    else:
        coords = dict(xi)
    for a, v in coords.items():
        if v < 0:
            raise InvalidSquaredCoordinate(f"negative squared coordinate {v} on {a!r}")
    out = {}
    for a, v in coords.items():
        if isinstance(v, Fraction):
            n, d = math.isqrt(v.numerator), math.isqrt(v.denominator)
            out[a] = Fraction(n, d) if n * n == v.numerator and d * d == v.denominator else math.sqrt(v)
        else:
            out[a] = math.sqrt(v)
    return Point(space, out, validate=not isinstance(xi, Point))
