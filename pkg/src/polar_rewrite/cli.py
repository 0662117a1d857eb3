"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (bad input, failed check),
2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .catops import PushbackResult, polarized_pushback, pullback, pushback, pushout
from .dot import export_dot
from .encodings import encode_hpo, encode_sqpo
from .errors import RewriteError, UnresolvedReference
from .polarity import PolarizedGraph, PolarizedMorphism
from .rewriting import derive, find_matchings, infer_lhs_polarity, reachable_gc, rewrite_step, validate_rule, verify_step
from .textfmt import Document, MorphismDecl, RuleDecl, document_errors, load_document, serialize_document
from .universal import Bound, verify_universal


class _Failure(Exception):
    pass


def _rule(doc: Document, name: str, infer: bool):
    p = doc.rule(name)
    return infer_lhs_polarity(p) if infer else p


def _graph_doc(**graphs) -> str:
    return serialize_document(Document(graphs=dict(graphs)))


def cmd_validate(args, out):
    doc = load_document(args.file)
    errors = document_errors(doc)
    for name in sorted(doc.sqpo):
        try:
            encode_sqpo(doc.sqpo_rule(name))
        except RewriteError as exc:
            errors.append(f"sqpo {name}: {exc}")
    for name in sorted(doc.hpo):
        try:
            encode_hpo(doc.hpo[name].rule)
        except RewriteError as exc:
            errors.append(f"hpo {name}: {exc}")
    for msg in errors:
        print(msg, file=sys.stderr)
    if errors:
        raise _Failure(f"{len(errors)} invalid item(s)")
    for name in sorted(doc.rules):
        for note in validate_rule(doc.rules[name].rule):
            print(f"# note: {note}", file=out)
    counts = (len(doc.graphs), len(doc.rules), len(doc.sqpo), len(doc.hpo), len(doc.morphisms))
    print("ok: {} graph(s), {} rule(s), {} sqpo, {} hpo, {} morphism(s)".format(*counts), file=out)


def cmd_match(args, out):
    doc = load_document(args.file)
    decl = doc.rules.get(args.rule)
    if decl is None:
        raise UnresolvedReference(f"no rule named {args.rule}")
    G = doc.graph(args.target)
    ms = find_matchings(decl.rule.L.graph, G)
    res = Document(morphisms={f"m{i}": MorphismDecl(f"m{i}", decl.lhs, args.target, m) for i, m in enumerate(ms)})
    print(f"# {len(ms)} match(es)", file=out)
    if ms:
        out.write(serialize_document(res))


def _pick_match(doc: Document, p, G, choice):
    if choice is not None and choice in doc.morphisms:
        m = doc.morphisms[choice].morphism
        if m.cod != G:
            raise RewriteError(f"morphism {choice} does not land in the target graph")
        return m
    ms = find_matchings(p.L.graph, G)
    if choice is None:
        idx = 0
    else:
        try:
            idx = int(choice)
        except ValueError:
            raise UnresolvedReference(f"--match {choice} is neither an index nor a morphism name") from None
    if not 0 <= idx < len(ms):
        raise _Failure(f"rule {p.name} has {len(ms)} match(es); index {idx} is unavailable")
    return ms[idx]


def cmd_apply(args, out):
    doc = load_document(args.file)
    p = _rule(doc, args.rule, args.infer_lhs_polarity)
    G = doc.graph(args.target)
    m = _pick_match(doc, p, G, args.match)
    step = rewrite_step(p, m)
    if not verify_step(p, m, step.H, step.h):
        raise _Failure("step result fails the rewrite check")
    graphs = {"H": step.H}
    if args.emit_intermediates:
        graphs.update(G_pol=step.G_pol, D_pol=step.D_pol, D=step.D)
    out.write(_graph_doc(**graphs))


def cmd_derive(args, out):
    doc = load_document(args.file)
    rules = [_rule(doc, r.strip(), args.infer_lhs_polarity) for r in args.rules.split(",") if r.strip()]
    G = doc.graph(args.target)
    trace = derive(rules, G, args.max_steps)
    for i, st in enumerate(trace, 1):
        print(f"# step {i}: {st.rule.name} ({len(st.H.nodes)} nodes, {len(st.H.edges)} edges)", file=out)
    H = trace[-1].H if trace else G
    if args.gc_root:
        H = reachable_gc(H, [r.strip() for r in args.gc_root.split(",")])
    out.write(_graph_doc(H=H))


def _encoded_doc(rules) -> Document:
    doc = Document()
    for p in rules:
        names = (f"{p.name}_lhs", f"{p.name}_interface", f"{p.name}_rhs")
        doc.graphs[names[0]] = p.L
        doc.graphs[names[1]] = p.K
        doc.graphs[names[2]] = PolarizedGraph(p.R)
        doc.rules[p.name] = RuleDecl(p.name, *names, p)
    return doc


def cmd_encode_sqpo(args, out):
    doc = load_document(args.file)
    rules = [encode_sqpo(doc.sqpo_rule(n)) for n in sorted(doc.sqpo)]
    out.write(serialize_document(_encoded_doc(rules)))


def cmd_encode_hpo(args, out):
    doc = load_document(args.file)
    rules = [encode_hpo(doc.hpo[n].rule) for n in sorted(doc.hpo)]
    out.write(serialize_document(_encoded_doc(rules)))


def cmd_check_square(args, out):
    doc = load_document(args.file)
    if args.morphisms:
        names = [s.strip() for s in args.morphisms.split(",")]
    else:
        names = sorted(doc.morphisms)[:2]
    if len(names) != 2:
        raise _Failure("check-square needs two morphisms")
    f, g = (doc.morphisms[n] if n in doc.morphisms else None for n in names)
    if f is None or g is None:
        raise UnresolvedReference(f"unknown morphism in {names}")
    bound = Bound(args.bound, args.bound)
    if args.kind == "pushout":
        sq = pushout(f.morphism, g.morphism)
        extra = f"H has {len(sq.H.nodes)} nodes, {len(sq.H.edges)} edges"
    elif args.kind == "pullback":
        K, l, d = pullback(f.morphism, g.morphism)
        sq = PushbackResult(l, f.morphism, g.morphism.dom, g.morphism, d)
        extra = f"K has {len(K.nodes)} nodes, {len(K.edges)} edges"
    elif args.polarized:
        src, mid, tgt = (doc.polarized(n) for n in (f.src, f.tgt, g.tgt))
        sq = polarized_pushback(PolarizedMorphism(src, mid, f.morphism), PolarizedMorphism(mid, tgt, g.morphism))
        extra = f"D has {len(sq.D.nodes)} nodes, {len(sq.D.edges)} edges"
    else:
        sq = pushback(f.morphism, g.morphism)
        extra = f"D has {len(sq.D.nodes)} nodes, {len(sq.D.edges)} edges"
    rep = verify_universal(sq, args.kind, bound)
    print(f"{args.kind}: {extra}; {rep.checked} case(s) checked", file=out)
    for v in rep.violations:
        print(f"violation: {v}", file=out)
    if not rep.ok:
        raise _Failure(f"{len(rep.violations)} violation(s)")
    print("ok", file=out)


def cmd_export_dot(args, out):
    doc = load_document(args.file)
    out.write(export_dot(doc.polarized(args.name), args.name))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polar-rewrite", description="Graph rewriting with polarized cloning.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse a file and validate its rules and morphisms")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("match", help="list the matches of a rule in a graph")
    s.add_argument("file")
    s.add_argument("--rule", required=True)
    s.add_argument("--target", required=True)
    s.set_defaults(func=cmd_match)

    s = sub.add_parser("apply", help="apply one rewrite step")
    s.add_argument("file")
    s.add_argument("--rule", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--match", help="match index or morphism block name (default: first match)")
    s.add_argument("--emit-intermediates", action="store_true", help="also print G_pol, D_pol and D")
    s.add_argument("--infer-lhs-polarity", action="store_true", help="sign L nodes from their interface preimages")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("derive", help="rewrite until no rule applies")
    s.add_argument("file")
    s.add_argument("--target", required=True)
    s.add_argument("--rules", required=True, help="comma-separated rule names, tried in order")
    s.add_argument("--max-steps", type=int, default=100)
    s.add_argument("--gc-root", help="keep only nodes reachable from these (comma-separated) nodes")
    s.add_argument("--infer-lhs-polarity", action="store_true")
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("encode-sqpo", help="translate sqpo blocks into polarized rules")
    s.add_argument("file")
    s.set_defaults(func=cmd_encode_sqpo)

    s = sub.add_parser("encode-hpo", help="translate hpo blocks into polarized rules")
    s.add_argument("file")
    s.set_defaults(func=cmd_encode_hpo)

    s = sub.add_parser("check-square", help="build a square from two morphisms and check its universal property")
    s.add_argument("file")
    s.add_argument("--kind", required=True, choices=["pushout", "pullback", "pushback"])
    s.add_argument("--bound", type=int, default=3, help="size bound for candidate graphs (nodes and edges)")
    s.add_argument("--morphisms", help="two morphism names A,B (default: the first two by name)")
    s.add_argument("--polarized", action="store_true", help="pushback of polarized graphs")
    s.set_defaults(func=cmd_check_square)

    s = sub.add_parser("export-dot", help="render a graph as DOT")
    s.add_argument("file")
    s.add_argument("--name", required=True)
    s.set_defaults(func=cmd_export_dot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "max_steps", 0) is not None and getattr(args, "max_steps", 0) < 0:
        ap.error("--max-steps must be non-negative")
    if getattr(args, "bound", 0) < 0:
        ap.error("--bound must be non-negative")
    try:
        args.func(args, sys.stdout)
    except (RewriteError, _Failure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
