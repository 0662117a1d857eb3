"""Rules, rewrite steps with polarized cloning, the step oracle and derivations."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .catops import PushbackResult, PushoutResult, polarized_pushback, pushout
from .errors import (
    EdgeStrictnessViolation,
    InvalidSpan,
    NotMono,
    RewriteError,
    SignatureMismatch,
    StepLimitExceeded,
    UnknownNode,
)
from .graph import Graph, Morphism, induced_subgraph, is_monomorphism, validate_morphism
from .ident import Ident, ident
from .polarity import (
    PolarizedGraph,
    PolarizedMorphism,
    maximal_polarization,
    validate_polarized_graph,
    validate_polarized_morphism,
)
from .search import find_matchings as _find

__all__ = [
    "Rule",
    "RewriteStep",
    "validate_rule",
    "infer_lhs_polarity",
    "find_matchings",
    "rewrite_step",
    "verify_step",
    "derive",
    "reachable_gc",
]


@dataclass(frozen=True)
class Rule:
    """A span ``L <-l- K -r-> R`` with ``L`` and ``K`` polarized."""

    name: str
    L: PolarizedGraph
    K: PolarizedGraph
    R: Graph
    l: PolarizedMorphism
    r: Morphism


@dataclass(frozen=True)
class RewriteStep:
    rule: Rule
    match: Morphism
    G_pol: PolarizedGraph
    pushback: PushbackResult
    pushout: PushoutResult

    @property
    def D_pol(self) -> PolarizedGraph:
        return self.pushback.D

    @property
    def l1(self) -> PolarizedMorphism:
        return self.pushback.l1

    @property
    def d(self) -> PolarizedMorphism:
        return self.pushback.d

    @property
    def D(self) -> Graph:
        return self.pushback.D.graph

    @property
    def H(self) -> Graph:
        return self.pushout.H

    @property
    def r1(self) -> Morphism:
        return self.pushout.r1

    @property
    def h(self) -> Morphism:
        return self.pushout.h


def validate_rule(p: Rule) -> list[str]:
    """Raise on a malformed rule; return advisory notes.

    The notes flag left-hand side nodes whose signs differ from the signs
    inherited from their ``l``-preimages.
    """
    for x in (p.L, p.K):
        validate_polarized_graph(x)
    if p.l.dom != p.K or p.l.cod != p.L:
        raise InvalidSpan(f"rule {p.name}: l must go from K to L")
    if p.r.dom != p.K.graph or p.r.cod != p.R:
        raise InvalidSpan(f"rule {p.name}: r must go from K to R")
    for f in (p.l.underlying, p.r):
        try:
            validate_morphism(f)
        except RewriteError as exc:
            raise InvalidSpan(f"rule {p.name}: {exc}") from exc
    le = p.l.underlying.edges
    star_img = {le[e] for e in p.K.star}
    strict = {le[e] for e in p.K.edges} & p.L.star
    if star_img != strict:
        bad = sorted(star_img ^ strict, key=lambda i: i.key)[0]
        raise EdgeStrictnessViolation(bad)
    try:
        validate_polarized_morphism(p.l)
    except RewriteError as exc:
        raise InvalidSpan(f"rule {p.name}: {exc}") from exc
    notes = []
    ln = p.l.underlying.nodes
    for n in p.L.nodes:
        pre = [k for k in p.K.nodes if ln[k] == n]
        want = ("+" if any(k in p.K.pos for k in pre) else "") + ("-" if any(k in p.K.neg for k in pre) else "")
        if p.L.sign(n) != want:
            notes.append(f"rule {p.name}: node {n} is marked {p.L.sign(n) or 'unsigned'}, inherits {want or 'unsigned'}")
    return notes


def infer_lhs_polarity(p: Rule) -> Rule:
    """Re-sign ``L``: each node gets the union of its ``l``-preimages' signs."""
    ln = p.l.underlying.nodes
    pos = {ln[k] for k in p.K.pos}
    neg = {ln[k] for k in p.K.neg}
    L = PolarizedGraph(p.L.graph, pos, neg, p.L.star)
    return Rule(p.name, L, p.K, p.R, PolarizedMorphism(p.K, L, p.l.underlying), p.r)


def find_matchings(L: Graph, G: Graph) -> list[Morphism]:
    """Injective, label-respecting morphisms ``L -> G`` in canonical order."""
    return _find(L, G)


def rewrite_step(p: Rule, m: Morphism) -> RewriteStep:
    """Polarize ``G`` maximally, take the polarized pushback of ``l`` and
    ``m``, forget the polarization and glue ``R`` in by a pushout."""
    if m.dom != p.L.graph:
        raise SignatureMismatch(f"match domain is not the left-hand side of rule {p.name}")
    validate_morphism(m)
    if not is_monomorphism(m):
        raise NotMono("matches must be injective")
    Gp = maximal_polarization(p.L, m)
    pb = polarized_pushback(p.l, PolarizedMorphism(p.L, Gp, m))
    po = pushout(p.r, pb.d.underlying)
    return RewriteStep(p, m, Gp, pb, po)


def verify_step(p: Rule, m: Morphism, H: Graph, h: Morphism) -> bool:
    """Check that ``G`` rewrites to ``H`` (with ``R`` embedded by ``h``).

    Works from the rule and the match alone: the part of ``H`` outside
    ``h``'s image must be the part of ``G`` outside ``m``'s image, and the
    remaining edges of ``H`` between each node pair must number exactly the
    linking edges of ``G`` copied there by the sign rules.
    """
    if h.cod != H:
        raise SignatureMismatch("h does not land in H")
    if h.dom != p.R:
        raise SignatureMismatch("h does not start at the right-hand side")
    if not is_monomorphism(m):
        raise NotMono("matches must be injective")
    try:
        validate_morphism(h)
        validate_morphism(m)
    except RewriteError:
        return False
    if not is_monomorphism(h):
        return False
    G = m.cod
    h_nodes = set(h.nodes.values())
    h_edges = set(h.edges.values())
    m_nodes = set(m.nodes.values())
    g_rest = induced_subgraph(G, G.node_set - m_nodes)
    h_rest = induced_subgraph(H, H.node_set - h_nodes)
    if g_rest.node_set != h_rest.node_set or dict(g_rest.ends) != dict(h_rest.ends):
        return False

    # the interface side: K nodes and untouched context nodes, kept apart
    K = p.K
    ln, rn = p.l.underlying.nodes, p.r.nodes
    side = []  # (image in G, image in H, positive, negative)
    for k in K.nodes:
        side.append((m.nodes[ln[k]], h.nodes[rn[k]], k in K.pos, k in K.neg))
    for n in g_rest.nodes:
        side.append((n, n, True, True))

    m_edges = set(m.edges.values())
    g_link = Counter()
    for e in G.edges:
        s, t = G.ends[e]
        if (s in m_nodes or t in m_nodes) and e not in m_edges:
            g_link[(s, t)] += 1
    h_link = Counter()
    for e in H.edges:
        if e in h_edges or e in h_rest.ends:
            continue
        h_link[H.ends[e]] += 1

    want = Counter()
    for gs, hs, pos, _ in side:
        if not pos:
            continue
        for gt, ht, _, neg in side:
            if neg:
                c = g_link.get((gs, gt), 0)
                if c:
                    want[(hs, ht)] += c
    return +want == +h_link


def derive(rules: Sequence[Rule], G: Graph, max_steps: int = 100) -> list[RewriteStep]:
    """Apply the first applicable rule at its first match until none applies.

    Raises :class:`StepLimitExceeded` (carrying the trace) when a rule still
    applies after ``max_steps`` steps.
    """
    trace: list[RewriteStep] = []
    cur = G
    while True:
        step = None
        for p in rules:
            ms = _find(p.L.graph, cur)
            if ms:
                if len(trace) >= max_steps:
                    raise StepLimitExceeded(max_steps, trace)
                step = rewrite_step(p, ms[0])
                break
        if step is None:
            return trace
        trace.append(step)
        cur = step.H


def reachable_gc(G: Graph, roots) -> Graph:
    """The subgraph induced by the nodes reachable from ``roots``."""
    roots = [ident(r) for r in roots]
    for r in roots:
        if r not in G.node_set:
            raise UnknownNode(r)
    succ: dict[Ident, list] = {}
    for s, t in G.ends.values():
        succ.setdefault(s, []).append(t)
    seen = set(roots)
    todo = list(roots)
    while todo:
        n = todo.pop()
        for t in succ.get(n, ()):
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return induced_subgraph(G, seen)
