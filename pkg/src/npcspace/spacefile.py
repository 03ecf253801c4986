"""Line-oriented scaffold-space files.

::

    # comment
    axes: a b c d
    edge: a b
    edge: b c
    face: a b c      (optional; see below)
    signed: true

Without ``face`` lines the complex is the clique complex of the edges, which
is always flag.  ``face`` lines declare faces explicitly (their subsets are
implied), so a non-flag complex such as a hollow triangle can be described
and rejected.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .core import ScaffoldGraph, is_flag
from .errors import NotFlag, SpaceFileError


@dataclass
class SpaceFile:
    axes: list
    edges: list = field(default_factory=list)
    faces: list = field(default_factory=list)
    signed: bool = False

    def complex_faces(self) -> list[frozenset]:
        return [frozenset(e) for e in self.edges] + [frozenset(f) for f in self.faces]

    def is_flag(self) -> bool:
        if not self.faces:
            return True
        return is_flag(self.complex_faces(), self.axes)

    def scaffold(self) -> ScaffoldGraph:
        """The space; raises :class:`NotFlag` when the declared complex is not flag."""
        if not self.is_flag():
            raise NotFlag("the declared complex is not flag, so it does not define an NPC orthant space")
        edges = {tuple(sorted(e)) for e in self.edges}
        for f in self.faces:
            fs = sorted(f)
            edges |= {(a, b) for i, a in enumerate(fs) for b in fs[i + 1:]}
        return ScaffoldGraph(self.axes, sorted(edges), signed=self.signed)

    def dumps(self) -> str:
        lines = ["axes: " + " ".join(self.axes)]
        lines += [f"edge: {a} {b}" for a, b in self.edges]
        lines += ["face: " + " ".join(f) for f in self.faces]
        if self.signed:
            lines.append("signed: true")
        return "\n".join(lines) + "\n"


def parse_spacefile(text: str) -> SpaceFile:
    axes = None
    edges, faces, signed = [], [], False
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise SpaceFileError(f"line {ln}: expected 'key: value'")
        key, items = key.strip().lower(), rest.split()
        if key == "axes":
            if axes is not None:
                raise SpaceFileError(f"line {ln}: axes declared twice")
            if len(set(items)) != len(items):
                raise SpaceFileError(f"line {ln}: duplicate axis ids")
            axes = items
        elif key == "edge":
            if len(items) != 2:
                raise SpaceFileError(f"line {ln}: an edge needs exactly two axes")
            if items[0] == items[1]:
                raise SpaceFileError(f"line {ln}: self-loop on {items[0]!r}")
            edges.append(tuple(items))
        elif key == "face":
            if not items:
                raise SpaceFileError(f"line {ln}: empty face")
            faces.append(tuple(items))
        elif key == "signed":
            if rest.strip().lower() not in ("true", "false"):
                raise SpaceFileError(f"line {ln}: signed must be true or false")
            signed = rest.strip().lower() == "true"
        else:
            raise SpaceFileError(f"line {ln}: unknown key {key!r}")
    if axes is None:
        raise SpaceFileError("missing 'axes:' line")
    known = set(axes)
    for item in [a for e in edges for a in e] + [a for f in faces for a in f]:
        if item not in known:
            raise SpaceFileError(f"undeclared axis {item!r}")
    return SpaceFile(axes, edges, faces, signed)


def read_spacefile(path) -> SpaceFile:
    return parse_spacefile(Path(path).read_text())
