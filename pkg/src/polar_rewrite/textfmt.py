"""A small line-oriented text format for graphs, rules and morphisms.

::

    # comment
    graph G {
      node j [label=free];
      node f [pol=-];
      edge jf: j -> f [star];
    }
    rule r {
      lhs L; interface K; rhs R;
      l { f1 -> f; x1 -> x; }
      r { f1 -> f1; }
    }
    morphism m : L -> G { f -> f; x -> x; }
    sqpo s { lhs L; interface K; rhs R; l { ... } r { ... } }
    hpo q { lhs L; rhs R; tau { f -> g; } sigma { x1 -> x; } }

Node signs are ``+``, ``-`` or ``+-`` (``±`` is accepted). Edge maps may be
left out when the endpoints leave a single candidate edge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .encodings import HpoRule, SqpoRule
from .errors import (
    AmbiguousEdgeMap,
    IncidenceViolation,
    ParseError,
    RewriteError,
    UnresolvedReference,
)
from .graph import Graph, Morphism, validate_morphism
from .ident import Ident, parse_ident
from .polarity import PolarizedGraph, PolarizedMorphism
from .rewriting import Rule, validate_rule

__all__ = [
    "Document",
    "RuleDecl",
    "MorphismDecl",
    "HpoDecl",
    "parse_document",
    "serialize_document",
    "serialize_graph",
    "load_document",
    "document_errors",
]

_WORD = re.compile(r"[\w']+")
_KEYWORDS = ("graph", "rule", "sqpo", "morphism", "hpo")


@dataclass(frozen=True)
class RuleDecl:
    """A rule block: names of its three graphs and the resolved rule."""

    name: str
    lhs: str
    interface: str
    rhs: str
    rule: Rule


@dataclass(frozen=True)
class MorphismDecl:
    name: str
    src: str
    tgt: str
    morphism: Morphism


@dataclass(frozen=True)
class HpoDecl:
    name: str
    lhs: str
    rhs: str
    rule: HpoRule


@dataclass
class Document:
    graphs: dict = field(default_factory=dict)  # name -> PolarizedGraph
    rules: dict = field(default_factory=dict)  # name -> RuleDecl
    sqpo: dict = field(default_factory=dict)  # name -> RuleDecl over plain spans
    hpo: dict = field(default_factory=dict)  # name -> HpoDecl
    morphisms: dict = field(default_factory=dict)  # name -> MorphismDecl

    def graph(self, name: str) -> Graph:
        return self.polarized(name).graph

    def polarized(self, name: str) -> PolarizedGraph:
        if name not in self.graphs:
            raise UnresolvedReference(f"no graph named {name}")
        return self.graphs[name]

    def rule(self, name: str) -> Rule:
        if name not in self.rules:
            raise UnresolvedReference(f"no rule named {name}")
        return self.rules[name].rule

    def sqpo_rule(self, name: str) -> SqpoRule:
        decl = self.sqpo[name]
        r = decl.rule
        return SqpoRule(name, r.L.graph, r.K.graph, r.R, r.l.underlying, r.r)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def fail(self, msg, pos=None):
        raise ParseError(msg, *self.where(pos))

    def ws(self):
        t = self.text
        while self.pos < len(t):
            c = t[self.pos]
            if c.isspace():
                self.pos += 1
            elif c == "#":
                nl = t.find("\n", self.pos)
                self.pos = len(t) if nl < 0 else nl + 1
            else:
                break

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def eat(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.eat(s):
            self.fail(f"expected {s!r}")

    def at_end(self) -> bool:
        self.ws()
        return self.pos >= len(self.text)

    def word(self, what="a name") -> str:
        self.ws()
        m = _WORD.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def ident(self) -> Ident:
        self.ws()
        try:
            i, end = parse_ident(self.text, self.pos, whole=False)
        except ValueError:
            self.fail("expected an identifier")
        self.pos = end
        return i

    def entries(self):
        """``{ a -> b; ... }`` as a list of (a, b, pos)."""
        self.expect("{")
        out = []
        while not self.eat("}"):
            self.ws()
            at = self.pos
            a = self.ident()
            self.expect("->")
            b = self.ident()
            self.expect(";")
            out.append((a, b, at))
        return out


def _parse_attrs(p: _Parser) -> dict:
    attrs = {}
    while p.eat("["):
        while True:
            p.ws()
            at = p.pos
            key = p.word("an attribute")
            if key == "star":
                attrs["star"] = True
            elif key in ("label", "pol"):
                p.expect("=")
                p.ws()
                if key == "pol":
                    for sign in ("+-", "±", "+", "-"):
                        if p.eat(sign):
                            attrs["pol"] = "+-" if sign == "±" else sign
                            break
                    else:
                        p.fail("expected a sign +, - or +-")
                else:
                    attrs["label"] = p.word("a label")
            else:
                p.fail(f"unknown attribute {key!r}", at)
            if p.eat("]"):
                break
            p.expect(",")
    return attrs


def _parse_graph(p: _Parser) -> PolarizedGraph:
    p.expect("{")
    nodes, ends, labels = [], {}, {}
    pos, neg, star = set(), set(), set()
    seen = set()
    while not p.eat("}"):
        p.ws()
        at = p.pos
        kw = p.word("'node' or 'edge'")
        if kw == "node":
            n = p.ident()
            if n in seen:
                p.fail(f"duplicate identifier {n}", at)
            seen.add(n)
            attrs = _parse_attrs(p)
            if "star" in attrs:
                p.fail("nodes cannot be star", at)
            nodes.append(n)
            if "label" in attrs:
                labels[n] = attrs["label"]
            sign = attrs.get("pol", "")
            if "+" in sign:
                pos.add(n)
            if "-" in sign:
                neg.add(n)
        elif kw == "edge":
            e = p.ident()
            if e in seen:
                p.fail(f"duplicate identifier {e}", at)
            seen.add(e)
            p.expect(":")
            s = p.ident()
            p.expect("->")
            t = p.ident()
            attrs = _parse_attrs(p)
            if "pol" in attrs or "label" in attrs:
                p.fail("edges take only the star attribute", at)
            ends[e] = (s, t, at)
            if attrs.get("star"):
                star.add(e)
        else:
            p.fail(f"unexpected {kw!r} in graph", at)
        p.expect(";")
    node_set = set(nodes)
    for e, (s, t, at) in ends.items():
        for v in (s, t):
            if v not in node_set:
                line, col = p.where(at)
                raise UnresolvedReference(f"line {line}, column {col}: edge {e} uses unknown node {v}")
    g = Graph(nodes, {e: (s, t) for e, (s, t, _) in ends.items()}, labels)
    return PolarizedGraph(g, pos, neg, star, check=False)


def _resolve_map(p: _Parser, entries, dom: Graph, cod: Graph, what: str) -> Morphism:
    nodes, edges = {}, {}
    for a, b, at in entries:
        if a in dom.node_set:
            if b not in cod.node_set:
                raise UnresolvedReference(f"{what}: {b} is not a node of the target (line {p.where(at)[0]})")
            nodes[a] = b
        elif a in dom.ends:
            if b not in cod.ends:
                raise UnresolvedReference(f"{what}: {b} is not an edge of the target (line {p.where(at)[0]})")
            edges[a] = b
        else:
            raise UnresolvedReference(f"{what}: {a} is not in the source graph (line {p.where(at)[0]})")
    for n in dom.nodes:
        if n not in nodes:
            raise UnresolvedReference(f"{what}: node {n} has no image")
    for e in dom.edges:
        if e in edges:
            continue
        s, t = dom.ends[e]
        c = cod.between(nodes[s], nodes[t])
        if len(c) > 1:
            raise AmbiguousEdgeMap(e)
        if not c:
            raise IncidenceViolation(e, f"{what}: no target edge between the images")
        edges[e] = c[0]
    return Morphism(dom, cod, nodes, edges)


def _parse_span_block(p: _Parser, name: str, start: int):
    refs, maps = {}, {}
    p.expect("{")
    while not p.eat("}"):
        p.ws()
        at = p.pos
        kw = p.word("a rule field")
        if kw in ("lhs", "interface", "rhs"):
            refs[kw] = (p.word("a graph name"), at)
            p.expect(";")
        elif kw in ("l", "r"):
            maps[kw] = p.entries()
        else:
            p.fail(f"unknown rule field {kw!r}", at)
    for k in ("lhs", "interface", "rhs"):
        if k not in refs:
            p.fail(f"block {name} lacks {k}", start)
    return refs, maps


def parse_document(text: str) -> Document:
    p = _Parser(text)
    doc = Document()
    pending = []
    names: set = set()
    while not p.at_end():
        p.ws()
        start = p.pos
        kw = p.word("a block keyword")
        if kw not in _KEYWORDS:
            p.fail(f"unknown block {kw!r}", start)
        name = p.word("a block name")
        if (kw, name) in names:
            p.fail(f"duplicate {kw} {name}", start)
        names.add((kw, name))
        if kw == "graph":
            doc.graphs[name] = _parse_graph(p)
        elif kw in ("rule", "sqpo"):
            pending.append((kw, name, start, _parse_span_block(p, name, start)))
        elif kw == "morphism":
            p.expect(":")
            src = p.word("a graph name")
            p.expect("->")
            tgt = p.word("a graph name")
            pending.append((kw, name, start, (src, tgt, p.entries())))
        else:
            refs, maps = {}, {}
            p.expect("{")
            while not p.eat("}"):
                p.ws()
                at = p.pos
                f = p.word("an hpo field")
                if f in ("lhs", "rhs"):
                    refs[f] = p.word("a graph name")
                    p.expect(";")
                elif f in ("tau", "sigma"):
                    maps[f] = p.entries()
                else:
                    p.fail(f"unknown hpo field {f!r}", at)
            if "lhs" not in refs or "rhs" not in refs:
                p.fail(f"hpo {name} needs lhs and rhs", start)
            pending.append((kw, name, start, (refs, maps)))

    for kw, name, start, body in pending:
        if kw in ("rule", "sqpo"):
            refs, maps = body
            L, K, R = (doc.polarized(refs[k][0]) for k in ("lhs", "interface", "rhs"))
            lm = _resolve_map(p, maps.get("l", []), K.graph, L.graph, f"{kw} {name}, l")
            rm = _resolve_map(p, maps.get("r", []), K.graph, R.graph, f"{kw} {name}, r")
            if kw == "sqpo":
                L, K = PolarizedGraph(L.graph), PolarizedGraph(K.graph)
            rule = Rule(name, L, K, R.graph, PolarizedMorphism(K, L, lm), rm)
            decl = RuleDecl(name, refs["lhs"][0], refs["interface"][0], refs["rhs"][0], rule)
            (doc.rules if kw == "rule" else doc.sqpo)[name] = decl
        elif kw == "morphism":
            src, tgt, entries = body
            f = _resolve_map(p, entries, doc.graph(src), doc.graph(tgt), f"morphism {name}")
            doc.morphisms[name] = MorphismDecl(name, src, tgt, f)
        else:
            refs, maps = body
            L, R = doc.graph(refs["lhs"]), doc.graph(refs["rhs"])
            tau = {a: b for a, b, _ in maps.get("tau", [])}
            sigma = {a: b for a, b, _ in maps.get("sigma", [])}
            doc.hpo[name] = HpoDecl(name, refs["lhs"], refs["rhs"], HpoRule(name, L, R, tau, sigma))
    return doc


def load_document(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def serialize_graph(name: str, x) -> str:
    if isinstance(x, Graph):
        x = PolarizedGraph(x, check=False)
    g = x.graph
    lines = []
    for n in g.nodes:
        attrs = ""
        if n in g.labels:
            attrs += f" [label={g.labels[n]}]"
        if x.sign(n):
            attrs += f" [pol={x.sign(n)}]"
        lines.append(f"  node {n}{attrs};")
    for e in g.edges:
        s, t = g.ends[e]
        lines.append(f"  edge {e}: {s} -> {t}{' [star]' if e in x.star else ''};")
    if not lines:
        return f"graph {name} {{ }}\n"
    return f"graph {name} {{\n" + "\n".join(lines) + "\n}\n"


def _map_line(key: str, f: Morphism, dom: Graph) -> str:
    items = [f"{k} -> {f.nodes[k]};" for k in dom.nodes] + [f"{e} -> {f.edges[e]};" for e in dom.edges]
    return f"  {key} {{ {' '.join(items)} }}" if items else f"  {key} {{ }}"


def _pair_line(key: str, mapping: dict) -> str:
    items = [f"{k} -> {mapping[k]};" for k in sorted(mapping, key=lambda i: i.key)]
    return f"  {key} {{ {' '.join(items)} }}" if items else f"  {key} {{ }}"


def serialize_document(doc: Document) -> str:
    blocks = [serialize_graph(n, doc.graphs[n]) for n in sorted(doc.graphs)]
    for kw, table in (("rule", doc.rules), ("sqpo", doc.sqpo)):
        for name in sorted(table):
            d = table[name]
            K = d.rule.K.graph
            blocks.append(
                "\n".join(
                    [
                        f"{kw} {name} {{",
                        f"  lhs {d.lhs};",
                        f"  interface {d.interface};",
                        f"  rhs {d.rhs};",
                        _map_line("l", d.rule.l.underlying, K),
                        _map_line("r", d.rule.r, K),
                        "}",
                    ]
                )
                + "\n"
            )
    for name in sorted(doc.hpo):
        d = doc.hpo[name]
        blocks.append(
            "\n".join(
                [
                    f"hpo {name} {{",
                    f"  lhs {d.lhs};",
                    f"  rhs {d.rhs};",
                    _pair_line("tau", dict(d.rule.tau)),
                    _pair_line("sigma", dict(d.rule.sigma)),
                    "}",
                ]
            )
            + "\n"
        )
    for name in sorted(doc.morphisms):
        d = doc.morphisms[name]
        f, dom = d.morphism, d.morphism.dom
        items = [f"{k} -> {f.nodes[k]};" for k in dom.nodes] + [f"{e} -> {f.edges[e]};" for e in dom.edges]
        body = f"{{ {' '.join(items)} }}" if items else "{ }"
        blocks.append(f"morphism {name} : {d.src} -> {d.tgt} {body}\n")
    return "\n".join(blocks)


def document_errors(doc: Document) -> list:
    """Domain errors found by validating every rule and morphism."""
    out = []
    for name in sorted(doc.rules):
        try:
            validate_rule(doc.rules[name].rule)
        except RewriteError as exc:
            out.append(f"rule {name}: {exc}")
    for name in sorted(doc.morphisms):
        try:
            validate_morphism(doc.morphisms[name].morphism)
        except RewriteError as exc:
            out.append(f"morphism {name}: {exc}")
    return out
