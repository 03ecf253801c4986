"""Weighted bipartite incompatibility graphs and their flow networks.

Weights are exact.  Each side is scaled to integers by the lcm of its
denominators, and the network uses capacities ``xi_a * sum(tau)`` on
source arcs and ``tau_b * sum(xi)`` on sink arcs, which is the normalized
network multiplied by ``sum(xi) * sum(tau)``.  So every flow computation is
plain integer arithmetic and the (P3) test is an integer equality.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

import networkx as nx

from .core import exact
from .errors import CountExceeded, EmptySide, FlowNotMaximum, ZeroWeight

SOURCE = "<s>"
SINK = "<t>"


def _to_ints(values: Sequence[Fraction]) -> list[int]:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in values]


@dataclass(frozen=True)
class IncompatibilityGraph:
    """Bipartite graph on ``a_axes`` and ``b_axes``; ``edges`` holds index pairs."""

    a_axes: tuple
    b_axes: tuple
    a_weight: tuple  # positive ints, proportional to squared lengths
    b_weight: tuple
    edges: frozenset
    adj: tuple = field(compare=False, repr=False, default=())

    def __post_init__(self):
        if not self.a_axes or not self.b_axes:
            raise EmptySide("both sides of an incompatibility graph must be nonempty")
        if any(w <= 0 for w in self.a_weight + self.b_weight):
            raise ZeroWeight("axis weights must be positive")
        adj = [[] for _ in self.a_axes]
        for i, j in sorted(self.edges):
            adj[i].append(j)
        object.__setattr__(self, "adj", tuple(tuple(x) for x in adj))

    @property
    def a_total(self) -> int:
        return sum(self.a_weight)

    @property
    def b_total(self) -> int:
        return sum(self.b_weight)

    @property
    def xi_tilde(self) -> tuple[Fraction, ...]:
        t = self.a_total
        return tuple(Fraction(w, t) for w in self.a_weight)

    @property
    def tau_tilde(self) -> tuple[Fraction, ...]:
        t = self.b_total
        return tuple(Fraction(w, t) for w in self.b_weight)

    @property
    def is_complete(self) -> bool:
        return len(self.edges) == len(self.a_axes) * len(self.b_axes)

    def weight_of(self, vertices: Iterable) -> Fraction:
        """Normalized weight of a set of axes (either side)."""
        vs = set(vertices)
        xa = sum(w for a, w in zip(self.a_axes, self.a_weight) if a in vs)
        xb = sum(w for b, w in zip(self.b_axes, self.b_weight) if b in vs)
        return Fraction(xa, self.a_total) + Fraction(xb, self.b_total)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(("a", a) for a in self.a_axes)
        g.add_nodes_from(("b", b) for b in self.b_axes)
        g.add_edges_from((("a", self.a_axes[i]), ("b", self.b_axes[j])) for i, j in self.edges)
        return g


def build_incompat_graph(A, B, compat: Callable) -> IncompatibilityGraph:
    """Graph from ``(axis, length)`` pairs; an edge joins each incompatible pair.

    Lengths may be floats, ints, Fractions or decimal strings; they are
    squared exactly.  ``compat(a, b)`` decides compatibility.
    """
    A, B = list(A), list(B)
    if not A or not B:
        raise EmptySide("both sides of an incompatibility graph must be nonempty")
    for ax, v in A + B:
        if v == 0:
            raise ZeroWeight(f"axis {ax!r} has zero length")
    a_sq = [exact(v) ** 2 for _, v in A]
    b_sq = [exact(v) ** 2 for _, v in B]
    return graph_from_squares([a for a, _ in A], a_sq, [b for b, _ in B], b_sq, compat)


def graph_from_squares(a_axes, a_sq, b_axes, b_sq, compat: Callable) -> IncompatibilityGraph:
    edges = frozenset(
        (i, j) for i, a in enumerate(a_axes) for j, b in enumerate(b_axes) if not compat(a, b)
    )
    return IncompatibilityGraph(tuple(a_axes), tuple(b_axes), tuple(_to_ints(a_sq)), tuple(_to_ints(b_sq)), edges)


@dataclass
class Flow:
    """A flow on the network of ``graph``; ``edge_flow[(i, j)]`` is in scaled units."""

    graph: IncompatibilityGraph
    edge_flow: dict
    scale: int  # a_total * b_total, the value of a flow saturating every arc

    @property
    def raw_value(self) -> int:
        return sum(self.edge_flow.values())

    @property
    def value(self) -> Fraction:
        return Fraction(self.raw_value, self.scale)

    def normalized(self) -> dict:
        return {e: Fraction(f, self.scale) for e, f in self.edge_flow.items() if f}


def _capacities(g: IncompatibilityGraph):
    sa = [w * g.b_total for w in g.a_weight]
    bt = [w * g.a_total for w in g.b_weight]
    return sa, bt


def max_flow(g: IncompatibilityGraph, reverse: bool = False) -> Flow:
    """Edmonds-Karp over exact integers.

    ``reverse`` scans vertices and edges in the opposite order, which usually
    yields a different maximum flow; useful for checking that derived objects
    do not depend on the flow chosen.
    """
    na, nb = len(g.a_axes), len(g.b_axes)
    sa, bt = _capacities(g)
    fa = [0] * na  # flow on s -> a
    fb = [0] * nb  # flow on b -> t
    fe: dict[tuple[int, int], int] = {e: 0 for e in g.edges}
    radj = [[] for _ in range(nb)]
    for i, j in g.edges:
        radj[j].append(i)
    a_order = list(range(na))[::-1] if reverse else list(range(na))
    adj = [list(x)[::-1] if reverse else list(x) for x in g.adj]
    if g.is_complete and not reverse:
        # Fast path: fill greedily, every arc can be saturated.
        return _greedy_complete(g, sa, bt)
    while True:
        # BFS in the residual graph; nodes are ("a", i) and ("b", j).
        parent: dict = {}
        q = deque()
        for i in a_order:
            if fa[i] < sa[i]:
                parent[("a", i)] = None
                q.append(("a", i))
        end = None
        while q and end is None:
            kind, x = q.popleft()
            if kind == "a":
                for j in adj[x]:
                    if ("b", j) not in parent:
                        parent[("b", j)] = ("a", x)
                        if fb[j] < bt[j]:
                            end = j
                            break
                        q.append(("b", j))
            else:
                for i in radj[x]:
                    if fe[(i, x)] > 0 and ("a", i) not in parent:
                        parent[("a", i)] = ("b", x)
                        q.append(("a", i))
        if end is None:
            break
        path = []
        node = ("b", end)
        while node is not None:
            path.append(node)
            node = parent[node]
        path.reverse()
        delta = min(sa[path[0][1]] - fa[path[0][1]], bt[end] - fb[end])
        for u, v in zip(path, path[1:]):
            if u[0] == "b":
                delta = min(delta, fe[(v[1], u[1])])
        fa[path[0][1]] += delta
        fb[end] += delta
        for u, v in zip(path, path[1:]):
            if u[0] == "a":
                fe[(u[1], v[1])] += delta
            else:
                fe[(v[1], u[1])] -= delta
    return Flow(g, fe, g.a_total * g.b_total)


def _greedy_complete(g, sa, bt) -> Flow:
    fe = {}
    i = j = 0
    ra, rb = list(sa), list(bt)
    for e in g.edges:
        fe[e] = 0
    while i < len(ra) and j < len(rb):
        d = min(ra[i], rb[j])
        fe[(i, j)] += d
        ra[i] -= d
        rb[j] -= d
        if ra[i] == 0:
            i += 1
        if rb[j] == 0:
            j += 1
    return Flow(g, fe, g.a_total * g.b_total)


def _check_flow(flow: Flow) -> tuple[list[int], list[int]]:
    g = flow.graph
    sa, bt = _capacities(g)
    fa = [0] * len(g.a_axes)
    fb = [0] * len(g.b_axes)
    for (i, j), f in flow.edge_flow.items():
        if f < 0 or (i, j) not in g.edges:
            raise FlowNotMaximum("not a valid flow")
        fa[i] += f
        fb[j] += f
    if any(x > c for x, c in zip(fa, sa)) or any(x > c for x, c in zip(fb, bt)):
        raise FlowNotMaximum("flow exceeds a capacity")
    return fa, fb


def residual_reachable(flow: Flow) -> set:
    """Vertices reachable from the source in the residual graph (source included)."""
    g = flow.graph
    sa, bt = _capacities(g)
    fa, fb = _check_flow(flow)
    seen = {SOURCE}
    q = deque()
    for i, a in enumerate(g.a_axes):
        if fa[i] < sa[i]:
            seen.add(("a", i))
            q.append(("a", i))
    while q:
        kind, x = q.popleft()
        if kind == "a":
            for j in g.adj[x]:
                if ("b", j) not in seen:
                    seen.add(("b", j))
                    q.append(("b", j))
        else:
            if fb[x] < bt[x]:
                seen.add(SINK)
            for (i, j), f in flow.edge_flow.items():
                if j == x and f > 0 and ("a", i) not in seen:
                    seen.add(("a", i))
                    q.append(("a", i))
    return seen


def min_weight_cover(g: IncompatibilityGraph, flow: Flow | None = None):
    """``(weight, cover, flow)`` for a minimum-weight vertex cover.

    The cover is read off the canonical minimum cut (the residual-reachable
    set ``R``): unreachable a-vertices plus reachable b-vertices.
    """
    flow = flow or max_flow(g)
    r = residual_reachable(flow)
    if SINK in r:
        raise FlowNotMaximum("an augmenting path exists")
    cover = {a for i, a in enumerate(g.a_axes) if ("a", i) not in r}
    cover |= {b for j, b in enumerate(g.b_axes) if ("b", j) in r}
    w = g.weight_of(cover)
    assert w == flow.value
    return w, frozenset(cover), flow


def satisfies_P3(g: IncompatibilityGraph) -> bool:
    if g.is_complete:
        return True
    return max_flow(g).raw_value == g.a_total * g.b_total


def min_cut_partition(g: IncompatibilityGraph, flow: Flow | None = None):
    """A nontrivial cut ``((I1, J1), (I2, J2))`` or ``None``.

    If (P3) fails this is the certifying cut from the residual-reachable set,
    with ``(I1, J1)`` the unreachable part.  It satisfies the strict ratio
    inequality ``||I1||/||J1|| < ||I2||/||J2||``.  If (P3) holds it is the
    split given by the smallest successor-closed set of residual groups, and
    both pieces then have equal normalized weights.
    """
    flow = flow or max_flow(g)
    r = residual_reachable(flow)
    if SINK in r:
        raise FlowNotMaximum("an augmenting path exists")
    if flow.raw_value < flow.scale:
        I2 = frozenset(a for i, a in enumerate(g.a_axes) if ("a", i) in r)
        J2 = frozenset(b for j, b in enumerate(g.b_axes) if ("b", j) in r)
        return (frozenset(g.a_axes) - I2, frozenset(g.b_axes) - J2), (I2, J2)
    dag = residual_dag(g, flow)
    best = None
    for k in range(len(dag.groups)):
        if k in (dag.source_group, dag.sink_group):
            continue
        clo = dag.closure(k)
        inner = clo - {dag.source_group, dag.sink_group}
        if len(inner) < len(dag.inner_groups) and (best is None or len(inner) < len(best)):
            best = inner
    if best is None:
        return None
    late = set().union(*(dag.groups[k] for k in best))
    I2 = frozenset(x for s, x in late if s == "a")
    J2 = frozenset(x for s, x in late if s == "b")
    return (frozenset(g.a_axes) - I2, frozenset(g.b_axes) - J2), (I2, J2)


@dataclass(frozen=True)
class ResidualDag:
    """Condensation of the residual graph of a maximum flow of value 1.

    ``groups`` are sets of tagged vertices ``("a", axis)``/``("b", axis)`` and
    the terminals.  An arc ``u -> v`` means that in any refinement the block
    of ``u`` comes no later than the block of ``v``.
    """

    groups: tuple
    arcs: frozenset
    source_group: int
    sink_group: int

    @property
    def inner_groups(self) -> list[int]:
        return [k for k in range(len(self.groups)) if k not in (self.source_group, self.sink_group)]

    def closure(self, k: int) -> set[int]:
        seen = {k}
        stack = [k]
        succ = self._succ()
        while stack:
            u = stack.pop()
            for v in succ.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def _succ(self) -> dict:
        succ: dict = {}
        for u, v in self.arcs:
            succ.setdefault(u, set()).add(v)
        return succ

    def inner_arcs(self) -> set:
        t = {self.source_group, self.sink_group}
        return {(u, v) for u, v in self.arcs if u not in t and v not in t}

    def topological_orderings(self) -> list[tuple[int, ...]]:
        g = nx.DiGraph()
        g.add_nodes_from(self.inner_groups)
        g.add_edges_from(self.inner_arcs())
        return [tuple(o) for o in nx.all_topological_sorts(g)]

    def canonical(self):
        """Order-free description, for comparing DAGs from different flows."""
        gs = [frozenset(x) for x in self.groups]
        return frozenset(gs), frozenset((gs[u], gs[v]) for u, v in self.arcs)


def residual_dag(g: IncompatibilityGraph, flow: Flow | None = None) -> ResidualDag:
    flow = flow or max_flow(g)
    r = residual_reachable(flow)
    if SINK in r:
        raise FlowNotMaximum("an augmenting path exists")
    if flow.raw_value != flow.scale:
        raise FlowNotMaximum("maximum flow is below 1, so (P3) fails and no residual DAG is defined")
    d = nx.DiGraph()
    d.add_node(SOURCE)
    d.add_node(SINK)
    for i, a in enumerate(g.a_axes):
        d.add_edge(("a", a), SOURCE)
    for j, b in enumerate(g.b_axes):
        d.add_edge(SINK, ("b", b))
    for (i, j), f in flow.edge_flow.items():
        a, b = ("a", g.a_axes[i]), ("b", g.b_axes[j])
        d.add_edge(a, b)
        if f > 0:
            d.add_edge(b, a)
    c = nx.condensation(d)
    groups = tuple(frozenset(c.nodes[k]["members"]) for k in range(c.number_of_nodes()))
    mapping = c.graph["mapping"]
    return ResidualDag(groups, frozenset(c.edges()), mapping[SOURCE], mapping[SINK])


def enumerate_refinements(g: IncompatibilityGraph, flow: Flow | None = None, max_count: int = 100_000):
    """All ordered partitions of the residual groups with no backward arc.

    Each refinement is a list of ``(A', B')`` pairs.  These are the
    equal-ratio refinements of the pair.
    """
    dag = residual_dag(g, flow)
    inner = dag.inner_groups
    arcs = dag.inner_arcs()
    preds = {k: {u for u, v in arcs if v == k} for k in inner}
    out: list[list[tuple[frozenset, frozenset]]] = []

    def block_pair(ks):
        members = set().union(*(dag.groups[k] for k in ks))
        return (frozenset(x for s, x in members if s == "a"), frozenset(x for s, x in members if s == "b"))

    def rec(remaining: frozenset, prefix: list):
        if not remaining:
            if len(out) >= max_count:
                raise CountExceeded(f"more than {max_count} refinements")
            out.append([block_pair(b) for b in prefix])
            return
        items = sorted(remaining)
        # First block: nonempty subset of remaining closed under predecessors within remaining.
        for mask in range(1, 1 << len(items)):
            block = frozenset(items[t] for t in range(len(items)) if mask >> t & 1)
            if all(preds[k] & remaining <= block for k in block):
                prefix.append(block)
                rec(remaining - block, prefix)
                prefix.pop()

    rec(frozenset(inner), [])
    return out
