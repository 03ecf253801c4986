"""Command-line interface.

Tree mode reads Newick; scaffold mode (``--space FILE``) reads points as
JSON objects ``{"axis": length}``, either one per line or as a JSON list.
Errors go to stderr as ``{"error": code, "message": text}`` with a nonzero
exit status.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import frechet, geodesic, vistal
from .core import Point, TreeSpace
from .errors import NPCSpaceError
from .newick import parse_newick, write_tree
from .spacefile import read_spacefile


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("UsageError", message)


def _fmt(v) -> str:
    return format(float(v), ".12g")


class Context:
    """Space plus point reading/writing for the chosen mode."""

    def __init__(self, args):
        self.labels = None
        self.root_label = getattr(args, "root_label", None)
        space_path = getattr(args, "space", None)
        self.space = read_spacefile(space_path).scaffold() if space_path else None
        self.tree_mode = space_path is None

    def read_points(self, path) -> tuple[list, list]:
        text = Path(path).read_text()
        if self.tree_mode:
            doc = parse_newick(text, root_label=self.root_label, labels=self.labels)
            self.space, self.labels = doc.space, doc.labels
            return doc.trees, [nm or str(i) for i, nm in enumerate(doc.names)]
        return self._json_points(text), None

    def _json_points(self, text: str) -> list:
        text = text.strip()
        try:
            data = json.loads(text) if text.startswith("[") else [json.loads(ln) for ln in text.splitlines() if ln.strip()]
        except json.JSONDecodeError as e:
            raise CliError("JsonError", str(e)) from None
        return [self.point(obj) for obj in data]

    def point(self, obj) -> Point:
        if isinstance(obj, str):
            obj = obj.strip()
            if self.tree_mode and not obj.startswith("{"):
                if Path(obj).is_file():
                    obj = Path(obj).read_text()
                return parse_newick(obj, labels=self.labels, root_label=self.root_label).trees[0]
            if Path(obj).is_file():
                obj = Path(obj).read_text()
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as e:
                raise CliError("JsonError", str(e)) from None
        if not isinstance(obj, dict):
            raise CliError("JsonError", "a point must be a JSON object")
        return Point(self.space, {k: float(v) for k, v in obj.items()})

    def write(self, p: Point) -> str:
        if isinstance(p.space, TreeSpace):
            return write_tree(p, self.labels)
        return json.dumps({str(a): float(_fmt(v)) for a, v in sorted(p.coords.items(), key=lambda kv: str(kv[0]))})


def cmd_distance(args, out):
    ctx = Context(args)
    pts, names = ctx.read_points(args.file)
    names = names or [str(i) for i in range(len(pts))]
    if args.pair:
        i, j = args.pair
        for k in (i, j):
            if not 0 <= k < len(pts):
                raise CliError("IndexError", f"tree index {k} out of range 0..{len(pts) - 1}")
        g = geodesic.gtp_support(pts[i], pts[j])
        print(_fmt(g.distance), file=out)
        if args.at is not None:
            print(ctx.write(g.point_at(args.at)), file=out)
        return
    if args.at is not None:
        raise CliError("UsageError", "--at needs --pair")
    m = geodesic.distance_matrix(pts)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["tree"] + names)
    for nm, row in zip(names, m):
        w.writerow([nm] + [_fmt(v) for v in row])


def _read_weights(path, r: int):
    text = Path(path).read_text().replace(",", " ").split()
    try:
        w = [float(x) for x in text]
    except ValueError as e:
        raise CliError("WeightsError", str(e)) from None
    if len(w) != r:
        raise CliError("WeightsError", f"expected {r} weights, found {len(w)}")
    return w


def cmd_mean(args, out):
    ctx = Context(args)
    pts, _ = ctx.read_points(args.file)
    sample = (frechet.WeightedSample.normalized(pts, _read_weights(args.weights, len(pts)))
              if args.weights else frechet.WeightedSample(pts))
    trace = []
    if args.method == "sturm":
        params = frechet.SturmParams(K=args.K, N=args.N, eps=args.eps, seed=args.seed,
                                     trace_every=args.trace_every if args.trace else 0)
        res = frechet.sturm_mean(sample, params)
        mean, trace = res.mean, res.trace
    elif args.method == "descent":
        res = frechet.descent_mean(sample, frechet.DescentOptions(seed=args.seed))
        mean, trace = res.mean, res.trace
    elif args.method == "inductive":
        mean = frechet.inductive_mean(sample.points)
    elif args.method == "centroid":
        mean = frechet.bhv_centroid(sample, tol=args.eps)
    else:
        mean = frechet.mrc_tree(sample)
    print(ctx.write(mean), file=out)
    print(f"variance: {_fmt(frechet.variance(mean, sample))}", file=out)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "variance", "point"])
            for k, p, s in trace:
                w.writerow([k, _fmt(s), ctx.write(p)])


def cmd_variance(args, out):
    ctx = Context(args)
    pts, _ = ctx.read_points(args.file)
    x = ctx.point(args.at)
    s = frechet.variance(x, pts)
    result = {"variance": float(_fmt(s))}
    if x.space.is_maximal_face(x.support):
        name = getattr(x.space, "axis_name", str)
        grad = frechet.variance_gradient(x, pts)
        result["gradient"] = {name(a): float(_fmt(v)) for a, v in sorted(grad.items(), key=lambda kv: name(kv[0]))}
    print(json.dumps(result), file=out)


def _tree_orthant(ctx, text: str) -> frozenset:
    if Path(text).is_file():
        text = Path(text).read_text()
    doc = parse_newick(text, labels=ctx.labels, topology=True)
    return frozenset(doc.trees[0].coords)


def cmd_vistal(args, out):
    if args.tree_space is None and args.spacefile is None:
        raise CliError("UsageError", "give a space file or --tree-space n")
    ctx = Context(argparse.Namespace(space=args.spacefile, root_label=args.root_label))
    if args.tree_space is not None:
        src_text = Path(args.source).read_text() if Path(args.source).is_file() else args.source
        doc = parse_newick(src_text, root_label=args.root_label)
        if doc.space.n != args.tree_space:
            raise CliError("LeafCountMismatch", f"source has {doc.space.n + 1} leaves, expected {args.tree_space + 1}")
        ctx.space, ctx.labels = doc.space, doc.labels
        T = doc.trees[0]
        orthant = _tree_orthant(ctx, args.orthant)
    else:
        T = ctx.point(args.source)
        orthant = frozenset(a.strip() for a in args.orthant.split(",") if a.strip())
        for a in orthant:
            ctx.space.check_axis(a)
    result: dict = {}
    cells = None
    if args.enumerate:
        cells = vistal.enumerate_facets(T, orthant)
        result["cells"] = [c.to_json() for c in cells]
    if args.member:
        x = ctx.point(args.member)
        if not x.support <= orthant:
            raise CliError("NotInOrthant", "member point is not in the given orthant")
        xi = vistal.square(x)
        g = geodesic.gtp_support(x, T)
        facet = vistal.facet_system(T, orthant, g.pairs)
        result["gtp_facet"] = {"cell": facet.to_json(), "verdict": vistal.cell_membership(xi, facet)}
        if cells is not None:
            result["verdicts"] = [vistal.cell_membership(xi, c) for c in cells]
    if not args.enumerate and not args.member:
        raise CliError("UsageError", "give --enumerate and/or --member")
    json.dump(result, out, indent=1)
    out.write("\n")


def cmd_space_check(args, out):
    sf = read_spacefile(args.spacefile)
    flag = sf.is_flag()
    result = {"verdict": "flag" if flag else "not flag", "axes": len(sf.axes)}
    if flag:
        cliques = sf.scaffold().maximal_cliques()
        sizes: dict = {}
        for c in cliques:
            sizes[len(c)] = sizes.get(len(c), 0) + 1
        result["maximal_cliques"] = len(cliques)
        result["clique_sizes"] = {str(k): v for k, v in sorted(sizes.items())}
    print(json.dumps(result), file=out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="npcspace", description="Geodesics, Frechet means and vistal cells in NPC orthant spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("file", help="Newick trees, or JSON points with --space")
        sp.add_argument("--space", help="scaffold space file (scaffold mode)")
        sp.add_argument("--root-label", help="leaf label to use as index 0")

    d = sub.add_parser("distance", help="pairwise geodesic distances (CSV)")
    common(d)
    d.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"))
    d.add_argument("--at", type=float, metavar="LAMBDA", help="also print the point at LAMBDA on the geodesic")
    d.set_defaults(func=cmd_distance)

    m = sub.add_parser("mean", help="Frechet mean and comparators")
    common(m)
    m.add_argument("--method", choices=["sturm", "descent", "inductive", "centroid", "mrc"], default="sturm")
    m.add_argument("--K", type=int, default=100_000)
    m.add_argument("--N", type=int, default=10)
    m.add_argument("--eps", type=float, default=1e-4)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--weights", help="file of weights, one per point (normalized on read)")
    m.add_argument("--trace", help="write an iteration trace CSV here")
    m.add_argument("--trace-every", type=int, default=100)
    m.set_defaults(func=cmd_mean)

    v = sub.add_parser("variance", help="variance (and gradient when interior to a maximal orthant)")
    common(v)
    v.add_argument("--at", required=True, help="point as Newick or JSON (or a file holding it)")
    v.set_defaults(func=cmd_variance)

    vs = sub.add_parser("vistal", help="vistal facets and membership")
    vs.add_argument("spacefile", nargs="?")
    vs.add_argument("--tree-space", type=int, metavar="N")
    vs.add_argument("--root-label")
    vs.add_argument("--source", required=True)
    vs.add_argument("--orthant", required=True, help="comma-separated axes, or a Newick topology in tree mode")
    vs.add_argument("--enumerate", action="store_true")
    vs.add_argument("--member")
    vs.set_defaults(func=cmd_vistal)

    sc = sub.add_parser("space", help="space file utilities")
    scs = sc.add_subparsers(dest="space_command", required=True, parser_class=_Parser)
    chk = scs.add_parser("check", help="flag-condition verdict and maximal-clique census")
    chk.add_argument("spacefile")
    chk.set_defaults(func=cmd_space_check)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        buf = io.StringIO()
        args.func(args, buf)
        out.write(buf.getvalue())
        return 0
    except CliError as e:
        code, msg = e.code, str(e)
    except NPCSpaceError as e:
        code, msg = e.code, str(e)
    except OSError as e:
        code, msg = "IOError", str(e)
    except ValueError as e:
        code, msg = "ValueError", str(e)
    err.write(json.dumps({"error": code, "message": msg}) + "\n")
    return 1


if __name__ == "__main__":
    sys.exit(main())
