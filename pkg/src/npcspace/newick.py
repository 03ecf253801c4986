"""Newick reading and writing for points of BHV tree space.

Leaves are indexed by sorted label, smallest first, so the smallest label
becomes leaf 0 unless ``root_label`` names another one.  Every edge becomes
a split, pendant edges included.  Lengths are kept as exact Fractions of
the decimal text.  Missing lengths count as zero, and zero-length edges are
dropped.  A root of degree two is suppressed by merging its two edges.
The label after the outermost parenthesis is read as the tree's name.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .core import Point, Split, TreeSpace, canonical_split
from .errors import DuplicateLeafLabel, FewerThanThreeLeaves, NegativeLength, NewickError

_TOKEN = re.compile(
    r"\s*(?:(?P<punct>[(),:;])|(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<label>[A-Za-z0-9_.]+)|(?P<bad>\S))"
)


@dataclass
class _Node:
    label: str | None
    children: list
    length: Fraction | None
    line: int
    col: int


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        for m in _TOKEN.finditer(text):
            kind = m.lastgroup
            if kind is None:
                continue
            start = m.start(kind)
            line = text.count("\n", 0, start) + 1
            col = start - (text.rfind("\n", 0, start) + 1) + 1
            self.toks.append((kind, m.group(kind), line, col))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", *self._end())

    def _end(self):
        lines = self.text.split("\n")
        return len(lines), len(lines[-1]) + 1

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise NewickError(msg, line=tok[2], column=tok[3])

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            self.fail(f"expected {value!r}, found {t[1] or 'end of input'!r}", t)
        return t

    def trees(self):
        out = []
        while self.peek()[0] != "eof":
            node = self.subtree()
            self.expect(";")
            out.append(node)
        if not out:
            self.fail("no tree found")
        return out

    def subtree(self) -> _Node:
        t = self.peek()
        if t[0] == "bad":
            self.fail(f"unexpected character {t[1]!r}")
        if t[1] == "(":
            self.take()
            children = [self.subtree()]
            while self.peek()[1] == ",":
                self.take()
                children.append(self.subtree())
            self.expect(")")
            if len(children) < 2:
                self.fail("an internal node needs at least two children", t)
            label = self.label()
            return _Node(label, children, self.length(), t[2], t[3])
        label = self.label()
        if label is None:
            self.fail(f"expected a leaf label, found {t[1] or 'end of input'!r}")
        return _Node(label, [], self.length(), t[2], t[3])

    def label(self):
        t = self.peek()
        if t[0] in ("label", "num"):
            self.take()
            return t[1]
        return None

    def length(self):
        if self.peek()[1] != ":":
            return None
        self.take()
        t = self.take()
        if t[0] != "num":
            self.fail(f"expected a branch length, found {t[1] or 'end of input'!r}", t)
        v = Fraction(t[1])
        if v < 0:
            raise NegativeLength(f"negative branch length {t[1]} (line {t[2]}, column {t[3]})")
        return v


def _leaves(node: _Node, acc: list):
    if not node.children:
        acc.append(node)
    for c in node.children:
        _leaves(c, acc)
    return acc


@dataclass
class NewickDocument:
    trees: list  # Points of ``space``
    names: list
    space: TreeSpace

    @property
    def labels(self) -> tuple:
        return self.space.labels

    def __eq__(self, other):
        return (isinstance(other, NewickDocument) and self.space == other.space and self.names == other.names
                and all(a == b for a, b in zip(self.trees, other.trees)) and len(self.trees) == len(other.trees))


def leaf_order(labels, root_label: str | None = None) -> tuple:
    labels = sorted(labels)
    if root_label is not None:
        if root_label not in labels:
            raise NewickError(f"root label {root_label!r} is not a leaf")
        labels.remove(root_label)
        labels.insert(0, root_label)
    return tuple(labels)


def parse_newick(text: str, root_label: str | None = None, labels=None, topology: bool = False) -> NewickDocument:
    """Parse one or more trees sharing a leaf set.

    ``labels`` fixes the leaf order (index = position).  With ``topology``
    every internal edge is kept whatever its length, and pendant edges are
    kept when they have a nonzero length; all kept edges get length 1.
    """
    roots = _Parser(text).trees()
    leafsets = []
    for r in roots:
        leaves = _leaves(r, [])
        names = [lf.label for lf in leaves]
        seen = set()
        for lf in leaves:
            if lf.label in seen:
                raise DuplicateLeafLabel(f"duplicate leaf label {lf.label!r}", line=lf.line, column=lf.col)
            seen.add(lf.label)
        if len(names) < 3:
            raise FewerThanThreeLeaves(f"a tree needs at least 3 leaves, found {len(names)}", line=r.line, column=r.col)
        leafsets.append(frozenset(names))
    if any(s != leafsets[0] for s in leafsets):
        raise NewickError("trees in one document must share their leaf labels")
    if labels is None:
        labels = leaf_order(leafsets[0], root_label)
    else:
        labels = tuple(labels)
        if frozenset(labels) != leafsets[0]:
            raise NewickError("given label order does not match the leaves")
    space = TreeSpace(len(labels) - 1, labels)
    index = {lab: i for i, lab in enumerate(labels)}
    trees, names = [], []
    for r in roots:
        coords = _splits(r, index, space.n, topology)
        trees.append(Point(space, coords))
        names.append(r.label)
    return NewickDocument(trees, names, space)


def _splits(root: _Node, index: dict, n: int, topology: bool) -> dict:
    coords: dict = {}

    def edge_len(node):
        if topology:
            keep = bool(node.children) or (node.length is not None and node.length != 0)
            return Fraction(1) if keep else Fraction(0)
        return node.length or Fraction(0)

    def walk(node) -> frozenset:
        if not node.children:
            return frozenset([index[node.label]])
        return frozenset().union(*(walk(c) for c in node.children))

    def visit(node):
        for c in node.children:
            side = walk(c)
            length = edge_len(c)
            if length:
                s = canonical_split(side, n)
                # Only the two edges at a degree-2 root can share a split.
                coords[s] = length if topology else coords.get(s, 0) + length
            visit(c)

    visit(root)
    return coords


def _fmt(v) -> str:
    return format(float(v), ".12g")


def write_tree(p: Point, labels=None) -> str:
    """Newick for one point; children are ordered by smallest leaf index."""
    space = p.space
    n = space.n
    labels = labels or space.labels or tuple(str(i) for i in range(n + 1))
    full = frozenset(range(1, n + 1))
    clusters = {s.side: v for s, v in p.coords.items() if isinstance(s, Split)}
    root_len = clusters.pop(full, None)
    for i in range(1, n + 1):
        clusters.setdefault(frozenset([i]), None)
    items = sorted(clusters, key=len)

    def render(side: frozenset) -> str:
        inner = [c for c in items if c < side and not any(c < d < side for d in items)]
        v = clusters[side]
        tail = f":{_fmt(v)}" if v is not None else ""
        if len(side) == 1:
            return labels[next(iter(side))] + tail
        inner.sort(key=min)
        return "(" + ",".join(render(c) for c in inner) + ")" + tail

    top = [c for c in items if not any(c < d for d in items)]
    top.sort(key=min)
    lead = labels[0] + (f":{_fmt(root_len)}" if root_len is not None else "")
    return "(" + ",".join([lead] + [render(c) for c in top]) + ");"


def write_newick(doc: NewickDocument | Point, labels=None) -> str:
    if isinstance(doc, Point):
        return write_tree(doc, labels)
    lines = []
    for p, name in zip(doc.trees, doc.names):
        s = write_tree(p, doc.labels)
        lines.append(s[:-1] + (name or "") + ";")
    return "\n".join(lines) + "\n"
