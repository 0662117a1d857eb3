"""Polarized multigraphs.

A polarization marks some nodes positive (clones copy outgoing edges), some
negative (clones copy incoming edges) and some edges as star edges. A star
edge always runs from a positive node to a negative node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import NotASubset, NotMatching, NotMono, RewriteError, StarEndpointViolation
from .graph import (
    Graph,
    MatchingDecomposition,
    Morphism,
    compose,
    decompose_along_matching,
    edge_sum,
    identity,
    is_monomorphism,
    sum_graphs,
    validate_morphism,
)
from .ident import ident

__all__ = [
    "PolarizedGraph",
    "PolarizedMorphism",
    "PolarizedDecomposition",
    "validate_polarized_graph",
    "validate_polarized_morphism",
    "is_polarized_matching",
    "maximal_polarization",
    "decompose_polarized",
    "forget_polarization",
    "unpolarized",
    "restrict_polarization",
    "polarized_sum",
    "polarized_edge_sum",
    "polarized_identity",
    "polarized_compose",
]


class PolarizedGraph:
    """A graph with positive nodes, negative nodes and star edges."""

    __slots__ = ("graph", "pos", "neg", "star")

    def __init__(self, graph: Graph, pos: Iterable = (), neg: Iterable = (), star: Iterable = (), check: bool = True):
        self.graph = graph
        self.pos = frozenset(ident(n) for n in pos)
        self.neg = frozenset(ident(n) for n in neg)
        self.star = frozenset(ident(e) for e in star)
        if check:
            validate_polarized_graph(self)

    @property
    def nodes(self):
        return self.graph.nodes

    @property
    def edges(self):
        return self.graph.edges

    def sign(self, n) -> str:
        """``"+-"``, ``"+"``, ``"-"`` or ``""``."""
        n = ident(n)
        return ("+" if n in self.pos else "") + ("-" if n in self.neg else "")

    def is_star(self, e) -> bool:
        return ident(e) in self.star

    def __eq__(self, other):
        if not isinstance(other, PolarizedGraph):
            return NotImplemented
        return (self.graph, self.pos, self.neg, self.star) == (other.graph, other.pos, other.neg, other.star)

    def __hash__(self):
        return hash((self.graph, self.pos, self.neg, self.star))

    def __repr__(self):
        ns = ", ".join(f"{n}{self.sign(n).replace('+-', '±')}" for n in self.nodes)
        es = ", ".join(
            f"{e}:{s}->{t}{'*' if e in self.star else ''}" for e in self.edges for s, t in [self.graph.ends[e]]
        )
        return f"PolarizedGraph(nodes=[{ns}], edges=[{es}])"


def validate_polarized_graph(x: PolarizedGraph) -> None:
    g = x.graph
    for n in sorted(x.pos | x.neg, key=lambda i: i.key):
        if n not in g.node_set:
            raise NotASubset(n)
    for e in sorted(x.star, key=lambda i: i.key):
        if e not in g.ends:
            raise NotASubset(e)
        s, t = g.ends[e]
        if s not in x.pos or t not in x.neg:
            raise StarEndpointViolation(e)


def unpolarized(g: Graph) -> PolarizedGraph:
    return PolarizedGraph(g, check=False)


def forget_polarization(x: PolarizedGraph) -> Graph:
    return x.graph


def restrict_polarization(y: PolarizedGraph, sub: Graph) -> PolarizedGraph:
    """The polarization of ``y`` intersected with the subgraph ``sub``."""
    return PolarizedGraph(
        sub,
        y.pos & sub.node_set,
        y.neg & sub.node_set,
        frozenset(e for e in y.star if e in sub.ends),
        check=False,
    )


class PolarizedMorphism:
    """A graph morphism between polarized graphs preserving all three marks."""

    __slots__ = ("dom", "cod", "underlying")

    def __init__(self, dom: PolarizedGraph, cod: PolarizedGraph, underlying: Morphism | Mapping, edges: Mapping | None = None):
        if not isinstance(underlying, Morphism):
            underlying = Morphism(dom.graph, cod.graph, underlying, edges)
        self.dom = dom
        self.cod = cod
        self.underlying = underlying

    @property
    def nodes(self):
        return self.underlying.nodes

    @property
    def edges(self):
        return self.underlying.edges

    def __eq__(self, other):
        if not isinstance(other, PolarizedMorphism):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.underlying == other.underlying

    def __hash__(self):
        return hash(self.underlying)

    def __repr__(self):
        return f"Polarized{self.underlying!r}"


def validate_polarized_morphism(f: PolarizedMorphism) -> None:
    validate_morphism(f.underlying)
    nm, em = f.underlying.nodes, f.underlying.edges
    for n in f.dom.pos:
        if nm[n] not in f.cod.pos:
            raise RewriteError(f"positive node {n} maps to non-positive {nm[n]}")
    for n in f.dom.neg:
        if nm[n] not in f.cod.neg:
            raise RewriteError(f"negative node {n} maps to non-negative {nm[n]}")
    for e in f.dom.star:
        if em[e] not in f.cod.star:
            raise RewriteError(f"star edge {e} maps to non-star {em[e]}")


def polarized_identity(x: PolarizedGraph) -> PolarizedMorphism:
    return PolarizedMorphism(x, x, identity(x.graph))


def polarized_compose(g: PolarizedMorphism, f: PolarizedMorphism) -> PolarizedMorphism:
    return PolarizedMorphism(f.dom, g.cod, compose(g.underlying, f.underlying))


def is_polarized_matching(f: PolarizedMorphism) -> bool:
    """Monomorphism whose image meets the codomain polarization exactly in the image of the domain's."""
    if not is_monomorphism(f.underlying):
        raise NotMono("a polarized matching must be injective")
    nm, em = f.underlying.nodes, f.underlying.edges
    img_nodes = set(nm.values())
    img_edges = set(em.values())
    return (
        {nm[n] for n in f.dom.pos} == img_nodes & f.cod.pos
        and {nm[n] for n in f.dom.neg} == img_nodes & f.cod.neg
        and {em[e] for e in f.dom.star} == img_edges & f.cod.star
    )


def polarized_sum(x1: PolarizedGraph, x2: PolarizedGraph) -> PolarizedGraph:
    return PolarizedGraph(sum_graphs(x1.graph, x2.graph), x1.pos | x2.pos, x1.neg | x2.neg, x1.star | x2.star, check=False)


def polarized_edge_sum(x: PolarizedGraph, extra: Mapping, extra_star: Iterable = ()) -> PolarizedGraph:
    """Add edges; ``extra_star`` lists which of them are star edges."""
    g = edge_sum(x.graph, extra)
    extra_star = frozenset(ident(e) for e in extra_star)
    stray = extra_star - {ident(e) for e in extra}
    if stray:
        raise NotASubset(min(stray, key=lambda i: i.key))
    return PolarizedGraph(g, x.pos, x.neg, x.star | extra_star, check=False)


@dataclass(frozen=True)
class PolarizedDecomposition:
    """Decomposition of a polarized matching's codomain, polarized by intersection."""

    plain: MatchingDecomposition
    base: PolarizedGraph
    complement: PolarizedGraph
    linking: Mapping
    linking_star: frozenset

    def reassemble(self) -> PolarizedGraph:
        return polarized_edge_sum(polarized_sum(self.base, self.complement), self.linking, self.linking_star)


def decompose_polarized(m: PolarizedMorphism) -> PolarizedDecomposition:
    if not is_polarized_matching(m):
        raise NotMatching("decomposition needs a polarized matching")
    dec = decompose_along_matching(m.underlying)
    y = m.cod
    return PolarizedDecomposition(
        dec,
        restrict_polarization(y, dec.base),
        restrict_polarization(y, dec.complement),
        dec.linking,
        frozenset(e for e in dec.linking if e in y.star),
    )


def maximal_polarization(lhs: PolarizedGraph, m: Morphism) -> PolarizedGraph:
    """Polarize ``m.cod``: transport ``lhs``'s marks on the image, everything elsewhere.

    Nodes outside the image become both positive and negative, and every edge
    outside the image of ``lhs``'s edges is a star edge. With this, ``m`` is a
    polarized matching and every linking edge is a star edge.

    A linking edge leaving a non-positive image node (or entering a
    non-negative one) is still starred, so the result can fail
    :func:`validate_polarized_graph`. Such edges are never copied by the
    polarized pushback: no clone of that endpoint carries the needed sign.
    """
    if not is_monomorphism(m):
        raise NotMono("maximal polarization needs an injective matching")
    if m.dom != lhs.graph:
        raise RewriteError("matching domain differs from the polarized left-hand side")
    g = m.cod
    img_nodes = set(m.nodes.values())
    img_edges = set(m.edges.values())
    outside = [n for n in g.nodes if n not in img_nodes]
    pos = {m.nodes[n] for n in lhs.pos} | set(outside)
    neg = {m.nodes[n] for n in lhs.neg} | set(outside)
    star = {m.edges[e] for e in lhs.star} | {e for e in g.edges if e not in img_edges}
    return PolarizedGraph(g, pos, neg, star, check=False)
