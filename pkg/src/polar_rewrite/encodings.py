"""Sesqui-pushout and heterogeneous-pushout rules as polarized rules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .catops import pushback, pushout
from .errors import InvalidSpan, OutgoingEdgeOnC, RewriteError, SigmaOutOfDomain, TauNotTotal
from .graph import Graph, Morphism, validate_morphism
from .ident import fresh, ident
from .polarity import PolarizedGraph, PolarizedMorphism
from .rewriting import Rule

__all__ = ["SqpoRule", "HpoRule", "encode_sqpo", "encode_hpo", "sqpo_step_reference"]


@dataclass(frozen=True)
class SqpoRule:
    name: str
    L: Graph
    K: Graph
    R: Graph
    l: Morphism
    r: Morphism


@dataclass(frozen=True)
class HpoRule:
    """``tau`` sends every left node to a right node; ``sigma`` sends some
    right nodes (the set ``C``) back to the left nodes they copy."""

    name: str
    L: Graph
    R: Graph
    tau: Mapping = field(default_factory=dict)
    sigma: Mapping = field(default_factory=dict)


def _check_span(q: SqpoRule):
    if q.l.dom != q.K or q.r.dom != q.K or q.l.cod != q.L or q.r.cod != q.R:
        raise InvalidSpan(f"rule {q.name}: legs do not form a span L <- K -> R")
    for f in (q.l, q.r):
        try:
            validate_morphism(f)
        except RewriteError as exc:
            raise InvalidSpan(f"rule {q.name}: {exc}") from exc


def encode_sqpo(q: SqpoRule) -> Rule:
    """Every node of ``K`` and ``L`` signed both ways, no star edges."""
    _check_span(q)
    K = PolarizedGraph(q.K, q.K.nodes, q.K.nodes)
    L = PolarizedGraph(q.L, q.L.nodes, q.L.nodes)
    return Rule(q.name, L, K, q.R, PolarizedMorphism(K, L, q.l), q.r)


def encode_hpo(q: HpoRule) -> Rule:
    """Edgeless interface with one negative node per left node (incoming
    edges follow ``tau``) and one positive node per copied node of ``C``
    (outgoing edges are copied from its ``sigma`` image)."""
    tau = {ident(k): ident(v) for k, v in q.tau.items()}
    sigma = {ident(k): ident(v) for k, v in q.sigma.items()}
    for n in q.L.nodes:
        if n not in tau:
            raise TauNotTotal(f"tau has no image for {n}")
    for n, v in tau.items():
        if n not in q.L.node_set or v not in q.R.node_set:
            raise TauNotTotal(f"tau({n}) = {v} does not map left nodes to right nodes")
    for c, v in sigma.items():
        if c not in q.R.node_set or v not in q.L.node_set:
            raise SigmaOutOfDomain(f"sigma({c}) = {v} does not map right nodes to left nodes")
    C = sorted(sigma, key=lambda i: i.key)
    for c in C:
        if any(q.R.src(e) == c for e in q.R.edges):
            raise OutgoingEdgeOnC(c)

    taken = set(q.L.nodes)
    cname = {}
    for c in C:
        cname[c] = fresh(c, taken)
        taken.add(cname[c])
    K = PolarizedGraph(
        Graph(list(q.L.nodes) + list(cname.values())),
        cname.values(),
        q.L.nodes,
    )
    ln = {n: n for n in q.L.nodes}
    rn = {n: tau[n] for n in q.L.nodes}
    for c in C:
        ln[cname[c]] = sigma[c]
        rn[cname[c]] = c
    L = PolarizedGraph(q.L, {sigma[c] for c in C}, q.L.nodes)
    return Rule(q.name, L, K, q.R, PolarizedMorphism(K, L, ln), Morphism(K.graph, q.R, rn))


def sqpo_step_reference(q: SqpoRule, m: Morphism) -> Graph:
    """Plain final pullback complement followed by a pushout."""
    _check_span(q)
    pb = pushback(q.l, m)
    return pushout(q.r, pb.d).H
