"""Geodesics between two points of an NPC orthant space (GTP algorithm).

Axes fall into four classes relative to a pair ``(X, T)``:

* common axes, in both supports, interpolated linearly;
* ``n_t``: axes of T compatible with everything in X (ratio 0);
* ``n_x``: axes of X compatible with everything in T (ratio infinite);
* the rest, grouped into positive support pairs ``(A_i, B_i)``.

``n_x`` and ``n_t`` behave exactly like common axes whose length on the
other side is zero, and they are interpolated that way.

Combinatorial decisions (the (P3) test and ratio comparisons) use exact
rational squared lengths; lengths along the path are floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import Point, exact, require_same_space
from .errors import OutOfRange
from .flow import graph_from_squares, max_flow, min_cut_partition, satisfies_P3

NEGATIVE_COMMON = "negativeCommon"
ZERO_RATIO = "zeroRatio"
POSITIVE = "positive"
INFINITE_RATIO = "infiniteRatio"

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SupportPair:
    A: frozenset
    B: frozenset
    kind: str = POSITIVE


@dataclass(frozen=True)
class Support:
    """All support pairs in ratio order, each tagged with its ratio class."""

    pairs: tuple

    @property
    def positive(self) -> tuple:
        return tuple(p for p in self.pairs if p.kind == POSITIVE)

    def as_lists(self) -> tuple[list, list]:
        pos = self.positive
        return [p.A for p in pos], [p.B for p in pos]


def _sq(v) -> Fraction:
    if isinstance(v, float):
        n, d = abs(v).as_integer_ratio()
        return Fraction(n * n, d * d)
    return exact(abs(v)) ** 2


@dataclass
class GeodesicDescriptor:
    source: Point
    target: Point
    pairs: list  # minimal support, positive pairs only, as (A, B)
    refined: list  # before equal ratios were merged
    common: dict  # axis -> (x, t) including n_x (t = 0) and n_t (x = 0)
    n_x: frozenset
    n_t: frozenset
    sq: dict = field(repr=False)  # exact squared |length| per non-common axis

    def sq_norm(self, axes) -> Fraction:
        return sum((self.sq[a] for a in axes), Fraction(0))

    @property
    def ratios(self) -> list[float]:
        return [math.sqrt(self.sq_norm(A) / self.sq_norm(B)) for A, B in self.pairs]

    @property
    def exact_sq_ratios(self) -> list[Fraction]:
        return [self.sq_norm(A) / self.sq_norm(B) for A, B in self.pairs]

    @property
    def support(self) -> Support:
        x, t = self.source, self.target
        out = [SupportPair(frozenset([e]), frozenset([e]), NEGATIVE_COMMON) for e in self.common if e in x.coords and e in t.coords]
        out += [SupportPair(frozenset(), frozenset([e]), ZERO_RATIO) for e in sorted(self.n_t, key=str)]
        out += [SupportPair(A, B, POSITIVE) for A, B in self.pairs]
        out += [SupportPair(frozenset([e]), frozenset(), INFINITE_RATIO) for e in sorted(self.n_x, key=str)]
        return Support(tuple(out))

    def norms(self) -> list[tuple[float, float]]:
        return [(math.sqrt(self.sq_norm(A)), math.sqrt(self.sq_norm(B))) for A, B in self.pairs]

    @property
    def distance(self) -> float:
        terms = [(na + nb) ** 2 for na, nb in self.norms()]
        terms += [(float(t) - float(x)) ** 2 for x, t in self.common.values()]
        return math.sqrt(math.fsum(terms))

    def point_at(self, lam) -> Point:
        return _point_at(self, lam)


def _classify(X: Point, T: Point):
    space = X.space
    sx, st = X.coords, T.coords
    common = {e: (sx[e], st[e]) for e in sx if e in st}
    x_only = [e for e in sx if e not in st]
    t_only = [e for e in st if e not in sx]
    n_x = frozenset(e for e in x_only if all(space.compatible(e, f) for f in t_only))
    n_t = frozenset(f for f in t_only if all(space.compatible(e, f) for e in x_only))
    for e in n_x:
        common[e] = (sx[e], 0)
    for f in n_t:
        common[f] = (0, st[f])
    A0 = [e for e in x_only if e not in n_x]
    B0 = [f for f in t_only if f not in n_t]
    return common, n_x, n_t, A0, B0


def _split_pairs(space, A0, B0, sq) -> list[tuple[frozenset, frozenset]]:
    if not A0:
        return []
    pairs = [(list(A0), list(B0))]
    i = 0
    while i < len(pairs):
        A, B = pairs[i]
        if len(A) == 1 or len(B) == 1:
            i += 1  # one side a singleton: the graph is complete
            continue
        g = graph_from_squares(A, [sq[a] for a in A], B, [sq[b] for b in B], space.compatible)
        if g.is_complete:
            i += 1
            continue
        flow = max_flow(g)
        if flow.raw_value == flow.scale:
            i += 1
            continue
        (I1, J1), (I2, J2) = min_cut_partition(g, flow)
        pairs[i:i + 1] = [([a for a in A if a in I1], [b for b in B if b in J1]),
                          ([a for a in A if a in I2], [b for b in B if b in J2])]
    return [(frozenset(A), frozenset(B)) for A, B in pairs]


def _merge_equal(pairs, sq) -> list[tuple[frozenset, frozenset]]:
    out: list = []
    last = None
    for A, B in pairs:
        r = sum(sq[a] for a in A) / sum(sq[b] for b in B)
        if out and r == last:
            pA, pB = out[-1]
            out[-1] = (pA | A, pB | B)
        else:
            if out:
                assert r > last, "GTP produced a decreasing ratio sequence"
            out.append((A, B))
            last = r
    return out


def gtp_support(X: Point, T: Point) -> GeodesicDescriptor:
    """Minimal support of the geodesic from X to T."""
    require_same_space(X, T)
    common, n_x, n_t, A0, B0 = _classify(X, T)
    sq = {e: _sq(X.coords[e]) for e in A0}
    sq.update({f: _sq(T.coords[f]) for f in B0})
    refined = _split_pairs(X.space, A0, B0, sq)
    pairs = _merge_equal(refined, sq)
    return GeodesicDescriptor(X, T, pairs, refined, common, n_x, n_t, sq)


def distance(X: Point, T: Point) -> float:
    return gtp_support(X, T).distance


def _point_at(g: GeodesicDescriptor, lam) -> Point:
    if not 0 <= lam <= 1:
        raise OutOfRange(f"lambda must lie in [0, 1], got {lam}")
    if lam == 0:
        return Point(g.source.space, dict(g.source.coords), validate=False)
    if lam == 1:
        return Point(g.target.space, dict(g.target.coords), validate=False)
    lam = float(lam)
    mu = 1.0 - lam
    coords: dict = {}
    for e, (x, t) in g.common.items():
        v = x if x == t else mu * float(x) + lam * float(t)
        if v != 0:
            coords[e] = v
    X, T = g.source.coords, g.target.coords
    for (A, B), (na, nb) in zip(g.pairs, g.norms()):
        d = mu * na - lam * nb
        if abs(d) <= 8 * _EPS * (mu * na + lam * nb):
            continue  # leg boundary up to rounding: both sides vanish
        if d > 0:
            f = d / na
            for e in A:
                coords[e] = f * float(X[e])
        elif d < 0:
            f = -d / nb
            for e in B:
                coords[e] = f * float(T[e])
    return Point(g.source.space, coords, validate=False)


def point_at(X: Point, T: Point, lam) -> Point:
    """Point at fraction ``lam`` of the way from X to T."""
    if not 0 <= lam <= 1:
        raise OutOfRange(f"lambda must lie in [0, 1], got {lam}")
    return gtp_support(X, T).point_at(lam)


@dataclass(frozen=True)
class SupportCheck:
    valid: bool
    violated: tuple  # subset of ("structure", "P1", "P2", "P3"), in that order

    @property
    def first(self):
        return self.violated[0] if self.violated else None


def verify_support(X: Point, T: Point, support) -> SupportCheck:
    """Check a support (list of ``(A, B)`` pairs, or a :class:`Support`) against (P1)-(P3)."""
    require_same_space(X, T)
    if isinstance(support, Support):
        pairs = [(p.A, p.B) for p in support.positive]
    else:
        pairs = [(frozenset(A), frozenset(B)) for A, B in support]
    space = X.space
    _, _, _, A0, B0 = _classify(X, T)
    bad = []
    allA = [a for A, _ in pairs for a in A]
    allB = [b for _, B in pairs for b in B]
    if (sorted(map(str, allA)) != sorted(map(str, A0)) or sorted(map(str, allB)) != sorted(map(str, B0))
            or any(not A or not B for A, B in pairs)):
        bad.append("structure")
        return SupportCheck(False, tuple(bad))
    for i in range(len(pairs)):
        for j in range(i):
            u = list(pairs[i][0] | pairs[j][1])
            if any(not space.compatible(a, b) for k, a in enumerate(u) for b in u[k + 1:]):
                bad.append("P1")
                break
        if "P1" in bad:
            break
    sq = {e: _sq(X.coords[e]) for e in A0}
    sq.update({f: _sq(T.coords[f]) for f in B0})
    ratios = [sum(sq[a] for a in A) / sum(sq[b] for b in B) for A, B in pairs]
    if any(r2 < r1 for r1, r2 in zip(ratios, ratios[1:])):
        bad.append("P2")
    for A, B in pairs:
        A, B = list(A), list(B)
        g = graph_from_squares(A, [sq[a] for a in A], B, [sq[b] for b in B], space.compatible)
        if not satisfies_P3(g):
            bad.append("P3")
            break
    return SupportCheck(not bad, tuple(bad))


def path_length(X: Point, T: Point, pairs: Sequence) -> float:
    """Length of the path through the orthant sequence of ``pairs``.

    Valid (P1) for any support satisfying (P1) and (P2); the geodesic is the
    shortest such path.
    """
    common, *_ = _classify(X, T)
    terms = [(float(t) - float(x)) ** 2 for x, t in common.values()]
    for A, B in pairs:
        na = math.sqrt(math.fsum(float(X.coords[a]) ** 2 for a in A))
        nb = math.sqrt(math.fsum(float(T.coords[b]) ** 2 for b in B))
        terms.append((na + nb) ** 2)
    return math.sqrt(math.fsum(terms))


def distance_matrix(points: Sequence[Point]) -> np.ndarray:
    n = len(points)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = distance(points[i], points[j])
    return out
