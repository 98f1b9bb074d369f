"""``ringline`` command line.

Exit codes: 0 success, 1 a verification check failed, 2 usage error or
unknown descriptor.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import chaintrafo as ct
from . import models, suites
from .projline import Matrix2, distant_graph, enumerate_points, is_invertible
from .radpar import is_local_ring, parallel_classes
from .rings import RingError, build_ring, jacobson_radical, nil_exponent


class UsageError(Exception):
    pass


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses, so ``(0,1),1,0,1`` has four parts."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return parts


def _set(labels) -> str:
    return "{" + ", ".join(labels) + "}"


# ---------------------------------------------------------------------------
# subcommands


def cmd_ring_info(args, out) -> int:
    R = build_ring(args.descriptor)
    rad = jacobson_radical(R)
    print(f"ring: {R.descriptor}", file=out)
    print(f"size: {R.size}", file=out)
    print(f"commutative: {str(R.is_commutative()).lower()}", file=out)
    print(f"units ({len(R.units)}): {_set(R.labels[u] for u in sorted(R.units))}", file=out)
    print(f"nil exponent: {nil_exponent(R)}", file=out)
    print(f"local: {str(is_local_ring(R)).lower()}, radical: {rad!r}", file=out)
    return 0


def cmd_projline_enumerate(args, out) -> int:
    line = enumerate_points(build_ring(args.descriptor))
    if args.format == "json":
        print(json.dumps({"ring": line.ring.descriptor, "points": [p.label for p in line.points]}), file=out)
    else:
        print(f"{len(line)} points", file=out)
        for p in line.points:
            print(f"{p.index}\t{p.label}", file=out)
    return 0


def cmd_projline_graph(args, out) -> int:
    g = distant_graph(enumerate_points(build_ring(args.descriptor)))
    print(g.to_dot() if args.format == "dot" else g.to_json(), file=out)
    return 0


def cmd_parallelism(args, out) -> int:
    rep = parallel_classes(build_ring(args.descriptor))
    line = rep.line
    if args.json:
        doc = rep.as_dict()
        doc["class_members"] = [[line.points[i].label for i in c] for c in rep.classes]
        print(json.dumps(doc, sort_keys=True), file=out)
        return 0
    print(f"{len(line)} points, {len(rep.classes)} classes of size {rep.class_size}", file=out)
    for k, c in enumerate(rep.classes):
        print(f"class {k}: " + " ".join(line.points[i].label for i in c), file=out)
    return 0


def _emit(reports, args, out) -> int:
    timing = getattr(args, "timing", False)
    if args.json:
        if len(reports) == 1:
            print(reports[0].to_json(timing), file=out)
        else:
            doc = {"schema": 1, "ok": all(r.ok for r in reports),
                   "reports": [r.as_dict(timing) for r in reports]}
            print(json.dumps(doc, sort_keys=True), file=out)
    else:
        for r in reports:
            print(r.to_text(timing), file=out)
        if len(reports) > 1:
            failed = sum(not r.ok for r in reports)
            print(f"{len(reports) - failed}/{len(reports)} suites passed", file=out)
    return 0 if all(r.ok for r in reports) else 1


def cmd_verify(args, out) -> int:
    if args.suite == "all":
        reports = suites.verify_all(args.max_size, args.jobs)
    elif args.suite == "ring":
        reports = [suites.ring_suite(args.descriptor)]
    elif args.suite == "parallelism":
        reports = [suites.parallelism_suite(args.descriptor)]
    elif args.suite == "trafo":
        reports = [suites.trafo_suite(args.descriptor)]
    else:
        reports = [suites.model_suite(args.example, args.field, args.t)]
    return _emit(reports, args, out)


def cmd_trafo_apply(args, out) -> int:
    alg = ct.algebra_of(args.descriptor)
    R = alg.ring
    entries = split_top_level(args.matrix)
    if len(entries) != 4:
        raise UsageError(f"--matrix needs four comma-separated entries, got {len(entries)}")
    m = Matrix2(R, *entries)
    if not is_invertible(m):
        raise UsageError(f"{m!r} is not invertible")
    z = R.index(args.z)
    tr = ct.transform(alg, m)
    if z in tr.domain:
        print(f"{R.labels[z]} -> {R.labels[tr(z)]}", file=out)
    else:
        line = alg.line
        image = line.points[ct.point_permutation(line, m)[alg.iota_points[z]]]
        print(f"{R.labels[z]} is outside the domain; R({R.labels[z]},1) maps to R{image.label}", file=out)
    print(f"domain: {len(tr.domain)} of {R.size} elements, total: {str(tr.is_total).lower()}", file=out)
    return 0


def cmd_groups(args, out) -> int:
    alg = ct.algebra_of(args.descriptor)
    B, T, N = ct.group_B(alg), ct.group_T(alg), ct.group_N(alg)
    for g in (B, T, N):
        print(f"|{g.label}| = {len(g)}, closed: {str(g.is_closed()).lower()}, "
              f"commutative: {str(g.is_commutative()).lower()}", file=out)
    comm = all(ct.commutes(alg, nu, beta) for nu in N.members for beta in B.members)
    regular = ct.acts_regularly(alg, B, ct.parallel_class_of_infinity(alg))
    print(f"nu beta = beta nu for all pairs: {str(comm).lower()}", file=out)
    print(f"B regular on the parallel class of infinity: {str(regular).lower()}", file=out)
    return 0 if comm and regular else 1


def _model_alg(example: str, field: str):
    kind = {"dual": "dual", "ternion": "upper2"}[example]
    return ct.algebra_of(f"{kind}({field})")


def cmd_model_lines(args, out) -> int:
    alg = _model_alg(args.example, args.field)
    ls = models.model_line_set(alg, args.t, args.example)
    R = alg.ring
    rows = [([R.labels[z] for z in sorted(s)], tag) for s, tag in ls.lines]
    if args.json:
        doc = {"example": ls.example, "field": ls.field, "t": alg.field.labels[ls.t],
               "counts": ls.tag_counts(), "lines": [{"points": p, "tag": tag} for p, tag in rows]}
        print(json.dumps(doc, sort_keys=True), file=out)
        return 0
    counts = ", ".join(f"{k}: {v}" for k, v in ls.tag_counts().items())
    print(f"{len(rows)} lines ({counts})", file=out)
    for pts, tag in rows:
        print(f"[{tag}] " + " ".join(pts), file=out)
    return 0


def cmd_model_figures(args, out) -> int:
    text = models.export_figure_data(args.example, args.t, args.range, args.out)
    print(f"wrote {text.count(chr(10)) - 1} samples to {args.out}", file=out)
    return 0


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ringline", description="Projective lines over finite rings: inspection and verification.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ring = sub.add_parser("ring", help="ring inspection").add_subparsers(dest="action", required=True)
    info = ring.add_parser("info", help="size, units, radical, nil exponent, locality")
    info.add_argument("descriptor")
    info.set_defaults(func=cmd_ring_info)

    pl = sub.add_parser("projline", help="points and distant graph").add_subparsers(dest="action", required=True)
    en = pl.add_parser("enumerate", help="list the points of P(R)")
    en.add_argument("descriptor")
    en.add_argument("--format", choices=["text", "json"], default="text")
    en.set_defaults(func=cmd_projline_enumerate)
    gr = pl.add_parser("graph", help="export the distant graph")
    gr.add_argument("descriptor")
    gr.add_argument("--format", choices=["dot", "json"], default="dot")
    gr.set_defaults(func=cmd_projline_graph)

    par = sub.add_parser("parallelism", help="radical parallelism classes")
    par.add_argument("descriptor")
    par.add_argument("--json", action="store_true")
    par.set_defaults(func=cmd_parallelism)

    tr = sub.add_parser("trafo", help="induced maps of matrices").add_subparsers(dest="action", required=True)
    ap = tr.add_parser("apply", help="apply the map induced by a matrix to an element")
    ap.add_argument("descriptor", help="algebra, e.g. dual(gf(3))@gf(3)")
    ap.add_argument("--matrix", required=True, help="entries a,b,c,d (row-major)")
    ap.add_argument("--z", required=True, help="element label")
    ap.set_defaults(func=cmd_trafo_apply)

    gp = sub.add_parser("groups", help="sizes and laws of the groups B, T, N")
    gp.add_argument("descriptor")
    gp.set_defaults(func=cmd_groups)

    model = sub.add_parser("model", help="parabola models").add_subparsers(dest="action", required=True)
    ml = model.add_parser("lines", help="tagged line set of a model")
    ml.add_argument("--example", choices=["dual", "ternion"], required=True)
    ml.add_argument("--field", required=True, help="gf(q)")
    ml.add_argument("--t", required=True, help="nonzero field element")
    ml.add_argument("--json", action="store_true")
    ml.set_defaults(func=cmd_model_lines)
    mf = model.add_parser("figures", help="CSV samples of the real curves")
    mf.add_argument("--example", choices=["dual", "ternion"], required=True)
    mf.add_argument("--t", type=float, required=True)
    mf.add_argument("--range", required=True, help="a:b:step")
    mf.add_argument("--out", required=True)
    mf.set_defaults(func=cmd_model_figures)

    ver = sub.add_parser("verify", help="run verification suites").add_subparsers(dest="suite", required=True)
    for name in ("ring", "parallelism", "trafo"):
        v = ver.add_parser(name, help=f"{name} suite")
        v.add_argument("descriptor")
    v = ver.add_parser("model", help="model suite")
    v.add_argument("--example", choices=["dual", "ternion"], required=True)
    v.add_argument("--field", required=True)
    v.add_argument("--t", default="1")
    v = ver.add_parser("all", help="every suite over the catalog")
    v.add_argument("--max-size", type=int, default=27)
    v.add_argument("--jobs", type=int, default=1)
    for v in ver.choices.values():
        v.add_argument("--json", action="store_true")
        v.add_argument("--timing", action="store_true", help="include elapsed times (not byte-stable)")
        v.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "t", None) is not None and args.func in (cmd_model_lines, cmd_verify):
            args.t = build_ring(args.field).index(args.t)
        return args.func(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (RingError, ValueError, ArithmeticError, KeyError) as exc:
        print(f"ringline: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
