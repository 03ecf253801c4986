"""Vistal cells: regions of squared coordinates sharing one geodesic combinatorics.

A cell is fixed by a source point ``T``, an orthant ``O`` and a support
sequence ``((A_1, B_1), ..., (A_k, B_k))`` with a signature of ``LEQ``/``EQ``
symbols between consecutive ratios.  In squared coordinates ``xi`` it is a
polyhedral cone cut out by rows ``sum_e c_e xi_e >= 0`` (or ``= 0``):

* (O)  ``xi_e >= 0`` for ``e`` in ``O``;
* (P2) ``|B_i|^2 xi(A_{i+1}) - |B_{i+1}|^2 xi(A_i)``, ``>= 0`` or ``= 0``;
* (P3) ``|B_i - J|^2 xi(A_i - I) - |J|^2 xi(I) >= 0`` for nonempty
  ``I``, ``J`` with no incompatibility between them.

Interior means: equality rows hold, every other row is strict.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx

from .core import Point, exact, square, unsquare  # noqa: F401  (re-exported)
from .errors import EmptyInterior, LimitExceeded, SupportMismatch
from .geodesic import _classify, _sq

LEQ = "LEQ"
EQ = "EQ"
INTERIOR = "INTERIOR"
BOUNDARY = "BOUNDARY"
OUTSIDE = "OUTSIDE"

P3_LIMIT = 12


@dataclass(frozen=True)
class Row:
    coeffs: tuple  # ((axis, Fraction), ...)
    relation: str  # ">=" or "="
    family: str  # "O", "P2" or "P3"

    def value(self, xi: dict) -> Fraction:
        return sum((c * xi.get(a, 0) for a, c in self.coeffs), Fraction(0))

    def as_dict(self) -> dict:
        return dict(self.coeffs)


def _exact_coords(xi) -> dict:
    coords = xi.coords if isinstance(xi, Point) else xi
    return {a: exact(v) for a, v in coords.items() if v != 0}


@dataclass
class VistalCell:
    source: Point
    orthant: frozenset
    pairs: tuple  # ((A, B), ...) of frozensets
    signature: tuple  # length len(pairs) - 1, entries LEQ / EQ
    rows: list = field(default_factory=list)

    @property
    def signature_string(self) -> str:
        return "".join("<" if s == LEQ else "=" for s in self.signature)

    def runs(self) -> list[list[int]]:
        """Indices of pairs grouped into maximal equality runs."""
        out = [[0]] if self.pairs else []
        for i, s in enumerate(self.signature, start=1):
            if s == EQ:
                out[-1].append(i)
            else:
                out.append([i])
        return out

    def to_json(self) -> dict:
        name = _namer(self.source.space)
        return {
            "source": {name(a): float(v) for a, v in sorted(self.source.coords.items(), key=lambda kv: name(kv[0]))},
            "orthant": sorted(name(a) for a in self.orthant),
            "support": [{"A": sorted(map(name, A)), "B": sorted(map(name, B))} for A, B in self.pairs],
            "signature": self.signature_string,
            "rows": [
                {"family": r.family, "relation": r.relation,
                 "coeffs": {name(a): str(c) for a, c in sorted(r.coeffs, key=lambda ac: name(ac[0]))}}
                for r in self.rows
            ],
        }

    @classmethod
    def from_json(cls, data: dict, space) -> "VistalCell":
        lookup = _lookup(space, data)
        src = Point(space, {lookup(k): v for k, v in data["source"].items()})
        orth = frozenset(lookup(a) for a in data["orthant"])
        pairs = [(frozenset(map(lookup, p["A"])), frozenset(map(lookup, p["B"]))) for p in data["support"]]
        sig = tuple(LEQ if c == "<" else EQ for c in data["signature"])
        return cell_system(src, orth, pairs, sig)


def _namer(space):
    if hasattr(space, "axis_name"):
        return space.axis_name
    return str


def _lookup(space, data):
    if hasattr(space, "axis_name"):
        from .core import tree_scaffold

        table = {space.axis_name(a): a for a in tree_scaffold(space.n).axes}
    else:
        table = {str(a): a for a in space.axes}
    return lambda name: table[name]


def _split_orthant(T: Point, orthant: frozenset):
    """(common-like axes of the orthant, A0, B0) for points interior to ``orthant``."""
    probe = Point(T.space, {a: 1 for a in orthant}, validate=True)
    common, n_x, n_t, A0, B0 = _classify(probe, T)
    return set(common) & set(orthant), frozenset(A0), frozenset(B0)


def _check_structure(T: Point, orthant, pairs):
    _, A0, B0 = _split_orthant(T, orthant)
    allA = [a for A, _ in pairs for a in A]
    allB = [b for _, B in pairs for b in B]
    if len(allA) != len(set(allA)) or set(allA) != A0 or len(allB) != len(set(allB)) or set(allB) != B0:
        raise SupportMismatch("support pairs must partition the disjoint axes of the orthant and the source")
    if any(not A or not B for A, B in pairs):
        raise SupportMismatch("support pairs must have both sides nonempty")


def cell_system(T: Point, orthant: Iterable, pairs: Sequence, signature: Sequence[str]) -> VistalCell:
    orthant = frozenset(orthant)
    pairs = tuple((frozenset(A), frozenset(B)) for A, B in pairs)
    signature = tuple(signature)
    if len(signature) != max(len(pairs) - 1, 0):
        raise SupportMismatch(f"signature needs {max(len(pairs) - 1, 0)} symbols, got {len(signature)}")
    if any(s not in (LEQ, EQ) for s in signature):
        raise ValueError("signature symbols must be LEQ or EQ")
    _check_structure(T, orthant, pairs)
    space = T.space
    tsq = {b: _sq(v) for b, v in T.coords.items()}
    nb = [sum(tsq[b] for b in B) for _, B in pairs]
    rows = [Row(((e, Fraction(1)),), ">=", "O") for e in sorted(orthant, key=str)]
    for i, s in enumerate(signature):
        co: dict = {}
        for a in pairs[i + 1][0]:
            co[a] = co.get(a, 0) + nb[i]
        for a in pairs[i][0]:
            co[a] = co.get(a, 0) - nb[i + 1]
        rows.append(Row(tuple(sorted(co.items(), key=lambda ac: str(ac[0]))), "=" if s == EQ else ">=", "P2"))
    for A, B in pairs:
        rows.extend(_p3_rows(space, A, B, tsq))
    return VistalCell(T, orthant, pairs, signature, rows)


def facet_system(T: Point, orthant: Iterable, pairs: Sequence) -> VistalCell:
    """The all-LEQ cell (a facet when its interior is nonempty)."""
    return cell_system(T, orthant, pairs, (LEQ,) * max(len(pairs) - 1, 0))


def _p3_rows(space, A, B, tsq) -> list[Row]:
    if len(A) + len(B) > P3_LIMIT:
        raise LimitExceeded(f"(P3) enumeration for a pair with {len(A) + len(B)} axes exceeds {P3_LIMIT}")
    A = sorted(A, key=str)
    B = sorted(B, key=str)
    bad = {(a, b) for a in A for b in B if not space.compatible(a, b)}
    total_b = sum(tsq[b] for b in B)
    rows = []
    for ni in range(1, len(A) + 1):
        for I in itertools.combinations(A, ni):
            # J ranges over nonempty subsets of the b's with no edge into I.
            free = [b for b in B if all((a, b) not in bad for a in I)]
            for nj in range(1, len(free) + 1):
                for J in itertools.combinations(free, nj):
                    nj2 = sum(tsq[b] for b in J)
                    rest = total_b - nj2
                    co = [(a, rest) for a in A if a not in I] + [(a, -nj2) for a in I]
                    rows.append(Row(tuple(co), ">=", "P3"))
    return rows


# Membership

def cell_membership(xi, cell: VistalCell) -> str:
    x = _exact_coords(xi)
    if any(v < 0 for v in x.values()) or set(x) - cell.orthant:
        return OUTSIDE
    tight = False
    for r in cell.rows:
        v = r.value(x)
        if r.relation == "=":
            if v != 0:
                return OUTSIDE
        elif v < 0:
            return OUTSIDE
        elif v == 0:
            tight = True
    return BOUNDARY if tight else INTERIOR


def multivistal_membership(xi, cells: Sequence[VistalCell]) -> str:
    """Membership in the intersection of several cells."""
    verdicts = [cell_membership(xi, c) for c in cells]
    if OUTSIDE in verdicts:
        return OUTSIDE
    return INTERIOR if all(v == INTERIOR for v in verdicts) else BOUNDARY


# Valid support sequences and witnesses

def _incompat_graph(space, A, B) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(("a", a) for a in A)
    g.add_nodes_from(("b", b) for b in B)
    g.add_edges_from((("a", a), ("b", b)) for a in A for b in B if not space.compatible(a, b))
    return g


def is_valid_support_sequence(orthant, T: Point, pairs, signature) -> bool:
    """(F1)-(F3) on each equality run, plus (P1) between different runs."""
    orthant = frozenset(orthant)
    pairs = [(frozenset(A), frozenset(B)) for A, B in pairs]
    try:
        cell = VistalCell(T, orthant, tuple(pairs), tuple(signature))
        if len(cell.signature) != max(len(pairs) - 1, 0):
            return False
        _check_structure(T, orthant, pairs)  # (F1)
    except SupportMismatch:
        return False
    space = T.space
    for A, B in pairs:  # (F2)
        if not nx.is_connected(_incompat_graph(space, A, B)):
            return False
    runs = cell.runs()
    for run in runs:  # (F3): contracted blocks, arcs from the a-block to the b-block
        d = nx.DiGraph()
        d.add_nodes_from(run)
        for p in run:
            for q in run:
                if p != q and any(not space.compatible(a, b) for a in pairs[p][0] for b in pairs[q][1]):
                    d.add_edge(p, q)
        if not nx.is_directed_acyclic_graph(d):
            return False
    run_of = {i: r for r, run in enumerate(runs) for i in run}
    for i in range(len(pairs)):
        for j in range(i):
            if run_of[i] != run_of[j]:
                u = list(pairs[i][0] | pairs[j][1])
                if any(not space.compatible(a, b) for k, a in enumerate(u) for b in u[k + 1:]):
                    return False
    return True


def lemma_weights(space, A, B, tsq) -> dict:
    """Witness weights on one block: ``xi'_a = sum over incompatible b of tau_b / deg(b)``."""
    deg = {b: sum(1 for a in A if not space.compatible(a, b)) for b in B}
    return {a: sum((tsq[b] / deg[b] for b in B if not space.compatible(a, b)), Fraction(0)) for a in A}


def interior_witness(cell: VistalCell, max_doublings: int = 50):
    """A squared point interior to ``cell`` (dict axis -> Fraction), or ``None`` if none exists."""
    T = cell.source
    if not is_valid_support_sequence(cell.orthant, T, cell.pairs, cell.signature):
        return None
    space = T.space
    tsq = {b: _sq(v) for b, v in T.coords.items()}
    base_w: dict = {}
    for A, B in cell.pairs:
        base_w.update(lemma_weights(space, A, B, tsq))
    runs = cell.runs()
    run_of = {i: r for r, run in enumerate(runs) for i in run}
    for step in range(1, max_doublings + 1):
        base = 2 ** step  # run multipliers 1, base, base^2, ...
        xi = {e: Fraction(1) for e in cell.orthant}
        for i, (A, _) in enumerate(cell.pairs):
            m = Fraction(base) ** run_of[i]
            for a in A:
                xi[a] = base_w[a] * m
        if cell_membership(xi, cell) == INTERIOR:
            return xi
    return None


def cell_dimension(cell: VistalCell) -> int:
    if interior_witness(cell) is None:
        raise EmptyInterior("cell has empty relative interior")
    return len(cell.orthant) - sum(1 for s in cell.signature if s == EQ)


# Exact simplex

def strict_feasible(rows: Sequence, variables: Sequence | None = None):
    """Find ``xi`` with strict rows > 0, non-strict rows >= 0 and equality rows = 0.

    ``rows`` holds ``(coeffs: dict, kind)`` with kind ``"strict"``,
    ``"nonstrict"`` or ``"eq"`` (or :class:`Row`, read with interior
    semantics).  Maximizes a common slack ``s`` over the box
    ``0 <= xi, s <= 1`` with an exact-rational simplex (Bland's rule).  The
    systems are cones, so the box loses nothing.  Returns a dict
    ``var -> Fraction`` or ``None``.
    """
    norm = []
    for r in rows:
        if isinstance(r, Row):
            norm.append((r.as_dict(), "eq" if r.relation == "=" else "strict"))
        else:
            co, kind = r
            norm.append(({a: exact(c) for a, c in co.items()}, kind))
    if variables is None:
        variables = sorted({a for co, _ in norm for a in co}, key=str)
    variables = list(variables)
    n = len(variables)
    col = {v: k for k, v in enumerate(variables)}
    s_col = n
    # Constraints  A x <= b  with x = (xi..., s) >= 0.
    A: list[list[Fraction]] = []
    b: list[Fraction] = []

    def add(coef: dict, s_coef, rhs):
        row = [Fraction(0)] * (n + 1)
        for a, c in coef.items():
            row[col[a]] += c
        row[s_col] = Fraction(s_coef)
        A.append(row)
        b.append(Fraction(rhs))

    for co, kind in norm:
        neg = {a: -c for a, c in co.items()}
        if kind == "strict":
            add(neg, 1, 0)
        elif kind == "nonstrict":
            add(neg, 0, 0)
        elif kind == "eq":
            add(co, 0, 0)
            add(neg, 0, 0)
        else:
            raise ValueError(f"unknown row kind {kind!r}")
    for k in range(n + 1):
        add({}, 0, 1) if k == s_col else add({variables[k]: 1}, 0, 1)
    c = [Fraction(0)] * n + [Fraction(1)]
    x = _simplex_max(A, b, c)
    if x[s_col] <= 0:
        return None
    return {v: x[col[v]] for v in variables}


def _simplex_max(A, b, c):
    """Maximize c.x subject to A x <= b, x >= 0, with b >= 0 (slack basis is feasible)."""
    m, n = len(A), len(c)
    T = [list(A[i]) + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    obj = [-ci for ci in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]
    while True:
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise AssertionError("unbounded despite the box constraints")
        i = best[1]
        piv = T[i][enter]
        T[i] = [v / piv for v in T[i]]
        for r in range(m):
            if r != i and T[r][enter] != 0:
                f = T[r][enter]
                T[r] = [vr - f * vi for vr, vi in zip(T[r], T[i])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [vo - f * vi for vo, vi in zip(obj, T[i])]
        basis[i] = enter
    x = [Fraction(0)] * (n + m)
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    return x[:n]


def cell_strict_witness(cell: VistalCell):
    """Relative-interior point via :func:`strict_feasible`, or ``None``."""
    x = strict_feasible(cell.rows, sorted(cell.orthant, key=str))
    return x


# Enumeration

def _ordered_partitions(items: list, k: int):
    """Ordered partitions of ``items`` into exactly ``k`` nonempty blocks."""
    if k == 0:
        if not items:
            yield []
        return
    if len(items) < k:
        return
    for assign in itertools.product(range(k), repeat=len(items)):
        if len(set(assign)) == k:
            yield [frozenset(it for it, g in zip(items, assign) if g == j) for j in range(k)]


def enumerate_facets(T: Point, orthant: Iterable, max_axes: int = 8) -> list[VistalCell]:
    """All facets of the subdivision of ``orthant`` with respect to source ``T``."""
    orthant = frozenset(orthant)
    _, A0, B0 = _split_orthant(T, orthant)
    if len(A0) > max_axes or len(B0) > max_axes:
        raise LimitExceeded(f"enumeration is limited to {max_axes} disjoint axes per side")
    space = T.space
    if not A0:
        return [facet_system(T, orthant, [])]
    A0s, B0s = sorted(A0, key=str), sorted(B0, key=str)
    out = []
    for k in range(1, min(len(A0s), len(B0s)) + 1):
        for As in _ordered_partitions(A0s, k):
            for Bs in _ordered_partitions(B0s, k):
                pairs = list(zip(As, Bs))
                if not _p1(space, pairs):
                    continue
                cell = facet_system(T, orthant, pairs)
                if cell_strict_witness(cell) is not None:
                    out.append(cell)
    return out


def _p1(space, pairs) -> bool:
    for i in range(len(pairs)):
        for j in range(i):
            for a in pairs[i][0]:
                for b in pairs[j][1]:
                    if not space.compatible(a, b):
                        return False
    return True


def facet_of(xi, T: Point) -> VistalCell:
    """The facet (all-LEQ cell) built from the GTP support at ``unsquare(xi)``."""
    from .geodesic import gtp_support

    X = unsquare(xi) if isinstance(xi, Point) else unsquare(xi, T.space)
    g = gtp_support(X, T)
    return facet_system(T, X.support, g.pairs)
