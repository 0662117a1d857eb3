"""Directed multigraphs, morphisms, sums and matching decompositions.

Graphs are immutable. Node and edge identifiers are :class:`Ident` values and
every iteration follows their canonical order, so constructions built on top
of this module are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    DanglingEndpoint,
    IdClash,
    IncidenceViolation,
    MissingMapping,
    NotMono,
    UnknownNode,
)
from .ident import Ident, ident

__all__ = [
    "Graph",
    "Morphism",
    "MatchingDecomposition",
    "validate_morphism",
    "is_monomorphism",
    "identity",
    "compose",
    "sum_graphs",
    "edge_sum",
    "edges_between",
    "decompose_along_matching",
    "image",
    "induced_subgraph",
]


def _sorted(items) -> tuple:
    return tuple(sorted(items, key=lambda i: i.key))


class Graph:
    """A finite directed multigraph.

    ``edges`` maps each edge identifier to its ``(source, target)`` pair.
    ``labels`` optionally names nodes for the matcher; labels take no part
    in any categorical construction.
    """

    __slots__ = ("_nodes", "_ends", "_labels", "_node_order", "_edge_order", "_between", "_hash")

    def __init__(self, nodes: Iterable = (), edges: Mapping | None = None, labels: Mapping | None = None):
        node_set = frozenset(ident(n) for n in nodes)
        ends = {}
        for e, (s, t) in (edges or {}).items():
            e, s, t = ident(e), ident(s), ident(t)
            if s not in node_set or t not in node_set:
                raise DanglingEndpoint(e)
            if e in node_set:
                raise IdClash(e)
            ends[e] = (s, t)
        lab = {}
        for n, name in (labels or {}).items():
            n = ident(n)
            if n not in node_set:
                raise UnknownNode(n)
            if name is not None:
                lab[n] = str(name)
        self._nodes = node_set
        self._ends = ends
        self._labels = lab
        self._node_order = None
        self._edge_order = None
        self._between = None
        self._hash = None

    @classmethod
    def _raw(cls, nodes: frozenset, ends: dict, labels: dict) -> "Graph":
        # trusted constructor for already-validated identifiers
        g = cls.__new__(cls)
        g._nodes = nodes
        g._ends = ends
        g._labels = labels
        g._node_order = None
        g._edge_order = None
        g._between = None
        g._hash = None
        return g

    @property
    def nodes(self) -> tuple:
        if self._node_order is None:
            self._node_order = _sorted(self._nodes)
        return self._node_order

    @property
    def edges(self) -> tuple:
        if self._edge_order is None:
            self._edge_order = _sorted(self._ends)
        return self._edge_order

    @property
    def node_set(self) -> frozenset:
        return self._nodes

    @property
    def ends(self) -> Mapping:
        return self._ends

    @property
    def labels(self) -> Mapping:
        return self._labels

    def src(self, e) -> Ident:
        return self._ends[ident(e)][0]

    def tgt(self, e) -> Ident:
        return self._ends[ident(e)][1]

    def label(self, n) -> str | None:
        return self._labels.get(ident(n))

    def has_node(self, n) -> bool:
        return ident(n) in self._nodes

    def has_edge(self, e) -> bool:
        return ident(e) in self._ends

    def between(self, n, p) -> tuple:
        """Edges from ``n`` to ``p`` in canonical order (no validation)."""
        if self._between is None:
            idx = {}
            for e in self.edges:
                idx.setdefault(self._ends[e], []).append(e)
            self._between = {k: tuple(v) for k, v in idx.items()}
        return self._between.get((n, p), ())

    def __len__(self):
        return len(self._nodes)

    def is_empty(self) -> bool:
        return not self._nodes

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._nodes == other._nodes and self._ends == other._ends and self._labels == other._labels

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._nodes, frozenset(self._ends.items()), frozenset(self._labels.items())))
        return self._hash

    def unlabeled(self) -> "Graph":
        return Graph._raw(self._nodes, self._ends, {})

    def __repr__(self):
        es = ", ".join(f"{e}:{s}->{t}" for e in self.edges for s, t in [self._ends[e]])
        return f"Graph(nodes=[{', '.join(map(str, self.nodes))}], edges=[{es}])"


class Morphism:
    """A pair of finite maps (nodes, edges) between two graphs.

    Construction does not check incidence; call :func:`validate_morphism`.
    """

    __slots__ = ("dom", "cod", "nodes", "edges")

    def __init__(self, dom: Graph, cod: Graph, nodes: Mapping, edges: Mapping | None = None):
        self.dom = dom
        self.cod = cod
        self.nodes = {ident(k): ident(v) for k, v in nodes.items()}
        self.edges = {ident(k): ident(v) for k, v in (edges or {}).items()}

    @classmethod
    def _raw(cls, dom, cod, nodes, edges) -> "Morphism":
        f = cls.__new__(cls)
        f.dom, f.cod, f.nodes, f.edges = dom, cod, nodes, edges
        return f

    def node(self, n) -> Ident:
        return self.nodes[ident(n)]

    def edge(self, e) -> Ident:
        return self.edges[ident(e)]

    def is_mono(self) -> bool:
        return is_monomorphism(self)

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (
            self.dom == other.dom
            and self.cod == other.cod
            and self.nodes == other.nodes
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((frozenset(self.nodes.items()), frozenset(self.edges.items())))

    def __repr__(self):
        body = ", ".join(f"{k}->{self.nodes[k]}" for k in self.dom.nodes if k in self.nodes)
        ebody = ", ".join(f"{k}->{self.edges[k]}" for k in self.dom.edges if k in self.edges)
        return f"Morphism({{{body}}}{', {' + ebody + '}' if ebody else ''})"


@dataclass(frozen=True)
class MatchingDecomposition:
    """``whole = (base + complement) +e linking`` for a monomorphism's image."""

    whole: Graph
    base: Graph
    complement: Graph
    linking: Mapping  # edge -> (src, tgt), canonical order

    def reassemble(self) -> Graph:
        return edge_sum(sum_graphs(self.base, self.complement), self.linking)


def validate_morphism(f: Morphism) -> None:
    dom, cod = f.dom, f.cod
    for n in dom.nodes:
        if n not in f.nodes:
            raise MissingMapping(n)
        if f.nodes[n] not in cod.node_set:
            raise UnknownNode(f.nodes[n])
    for e in dom.edges:
        if e not in f.edges:
            raise MissingMapping(e)
        fe = f.edges[e]
        if fe not in cod.ends:
            raise IncidenceViolation(e, f"image {fe} is not an edge of the codomain")
        s, t = dom.ends[e]
        if cod.ends[fe] != (f.nodes[s], f.nodes[t]):
            raise IncidenceViolation(e)
    for k in f.nodes:
        if k not in dom.node_set:
            raise UnknownNode(k)
    for k in f.edges:
        if k not in dom.ends:
            raise UnknownNode(k)


def is_monomorphism(f: Morphism) -> bool:
    return len(set(f.nodes.values())) == len(f.nodes) and len(set(f.edges.values())) == len(f.edges)


def identity(g: Graph) -> Morphism:
    return Morphism._raw(g, g, {n: n for n in g.nodes}, {e: e for e in g.edges})


def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g . f`` (apply ``f`` first)."""
    return Morphism._raw(
        f.dom,
        g.cod,
        {k: g.nodes[v] for k, v in f.nodes.items()},
        {k: g.edges[v] for k, v in f.edges.items()},
    )


def sum_graphs(x1: Graph, x2: Graph) -> Graph:
    """Disjoint union; identifiers must not overlap."""
    for n in x2.node_set:
        if n in x1.node_set or n in x1.ends:
            raise IdClash(n)
    for e in x2.ends:
        if e in x1.ends or e in x1.node_set:
            raise IdClash(e)
    return Graph._raw(x1.node_set | x2.node_set, {**x1.ends, **x2.ends}, {**x1.labels, **x2.labels})


def edge_sum(x: Graph, extra: Mapping) -> Graph:
    """Add the edges ``extra`` (edge -> (src, tgt)) between existing nodes."""
    ends = dict(x.ends)
    for e, (s, t) in extra.items():
        e, s, t = ident(e), ident(s), ident(t)
        if s not in x.node_set or t not in x.node_set:
            raise DanglingEndpoint(e)
        if e in ends or e in x.node_set:
            raise IdClash(e)
        ends[e] = (s, t)
    return Graph._raw(x.node_set, ends, dict(x.labels))


def edges_between(x: Graph, n, p) -> tuple:
    n, p = ident(n), ident(p)
    for v in (n, p):
        if v not in x.node_set:
            raise UnknownNode(v)
    return x.between(n, p)


def induced_subgraph(g: Graph, nodes) -> Graph:
    keep = frozenset(ident(n) for n in nodes)
    for n in keep:
        if n not in g.node_set:
            raise UnknownNode(n)
    ends = {e: st for e, st in g.ends.items() if st[0] in keep and st[1] in keep}
    return Graph._raw(keep, ends, {n: l for n, l in g.labels.items() if n in keep})


def image(f: Morphism) -> Graph:
    """The subgraph of the codomain hit by ``f``."""
    cod = f.cod
    ns = frozenset(f.nodes.values())
    ends = {e: cod.ends[e] for e in f.edges.values()}
    return Graph._raw(ns, ends, {n: l for n, l in cod.labels.items() if n in ns})


def decompose_along_matching(m: Morphism) -> MatchingDecomposition:
    if not is_monomorphism(m):
        raise NotMono("decomposition needs a monomorphism")
    y = m.cod
    base = image(m)
    complement = induced_subgraph(y, y.node_set - base.node_set)
    linking = {e: y.ends[e] for e in y.edges if e not in base.ends and e not in complement.ends}
    return MatchingDecomposition(y, base, complement, linking)
