"""Brute-force checks of universal properties at desk scale.

Universal properties quantify over all graphs; here the quantification runs
over every graph up to a size bound (up to isomorphism) plus the objects of
the square itself. Mediating morphisms are counted by plain enumeration, so
these checks do not rely on the formulas used by the constructions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .catops import PushbackResult, PushoutResult
from .errors import SizeBoundExceeded
from .graph import Graph, Morphism, compose, decompose_along_matching
from .ident import ident
from .polarity import PolarizedGraph, PolarizedMorphism
from .search import count_morphisms, iter_morphisms

__all__ = ["Bound", "Report", "small_graphs", "verify_universal", "pullback_complements"]

# objects larger than this are refused; enumeration cost is exponential in
# nodes, while extra parallel edges only widen the (pinned) target search
HARD_LIMIT = 8
HARD_EDGE_LIMIT = 24


@dataclass(frozen=True)
class Bound:
    nodes: int = 3
    edges: int = 3


@dataclass
class Report:
    kind: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str):
        self.violations.append(msg)

    def finish(self) -> "Report":
        self.violations.sort()
        return self


def _canon(n: int, pairs) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        form = tuple(sorted((perm[s], perm[t]) for s, t in pairs))
        if best is None or form < best:
            best = form
    return best


@lru_cache(maxsize=None)
def small_graphs(max_nodes: int, max_edges: int) -> tuple:
    """Every graph with at most the given sizes, one per isomorphism class."""
    out = []
    for n in range(max_nodes + 1):
        slots = [(s, t) for s in range(n) for t in range(n)]
        seen = set()
        for k in range(max_edges + 1):
            for pairs in itertools.combinations_with_replacement(slots, k):
                c = _canon(n, pairs)
                if c in seen:
                    continue
                seen.add(c)
                out.append(
                    Graph(
                        [f"v{i}" for i in range(n)],
                        {f"e{j}": (f"v{s}", f"v{t}") for j, (s, t) in enumerate(c)},
                    )
                )
    return tuple(out)


def _bound(bound) -> Bound:
    if bound is None:
        return Bound()
    if isinstance(bound, Bound):
        return bound
    if isinstance(bound, int):
        return Bound(bound, bound)
    return Bound(*bound)


def _pins(pairs):
    """Merge (key, value) constraints; None on conflict."""
    out = {}
    for k, v in pairs:
        if out.setdefault(k, v) != v:
            return None
    return out


def _check_size(*graphs):
    for g in graphs:
        if len(g.nodes) > HARD_LIMIT:
            raise SizeBoundExceeded(HARD_LIMIT)
        if len(g.edges) > HARD_EDGE_LIMIT:
            raise SizeBoundExceeded(HARD_EDGE_LIMIT)


def _plain(f):
    return f.underlying if isinstance(f, PolarizedMorphism) else f


def _carrier(x):
    return x.graph if isinstance(x, PolarizedGraph) else x


def _same(f: Morphism, g: Morphism) -> bool:
    return f.nodes == g.nodes and f.edges == g.edges


def verify_universal(square, kind: str, bound=None) -> Report:
    """Check the universal property of ``square`` for ``kind``.

    ``pushout``: every cocone over candidate graphs factors through ``H``
    exactly once. ``pullback``: every cone factors through ``K`` exactly
    once. ``pushback``: the square is a pullback, and every pullback
    complement from the enumerated family maps into ``D`` by exactly one
    comparison morphism.
    """
    b = _bound(bound)
    if kind == "pushout":
        return _verify_pushout(square, b)
    if kind == "pullback":
        return _verify_pullback(square, b)
    if kind == "pushback":
        rep = _verify_pullback(square, b)
        rep.kind = "pushback"
        _verify_terminal(square, b, rep)
        return rep.finish()
    raise ValueError(f"unknown universal property {kind!r}")


def _candidates(b: Bound, *own):
    seen = set()
    for g in tuple(own) + small_graphs(b.nodes, b.edges):
        g = g.unlabeled()
        if g not in seen:
            seen.add(g)
            yield g


def _verify_pushout(sq: PushoutResult, b: Bound) -> Report:
    r, d, r1, h = sq.r, sq.d, sq.r1, sq.h
    K, R, D, H = r.dom, r.cod, d.cod, sq.H
    _check_size(K, R, D, H)
    rep = Report("pushout")
    if not _same(compose(h, r), compose(r1, d)):
        rep.add("square does not commute")
        return rep.finish()
    for X in _candidates(b, H, R, D):
        for bD in iter_morphisms(D, X):
            fn = _pins((r.nodes[k], bD.nodes[d.nodes[k]]) for k in K.nodes)
            fe = _pins((r.edges[e], bD.edges[d.edges[e]]) for e in K.edges)
            if fn is None or fe is None:
                continue
            for aR in iter_morphisms(R, X, fixed_nodes=fn, fixed_edges=fe):
                rep.checked += 1
                pn = _pins(
                    [(h.nodes[x], aR.nodes[x]) for x in R.nodes] + [(r1.nodes[y], bD.nodes[y]) for y in D.nodes]
                )
                pe = _pins(
                    [(h.edges[x], aR.edges[x]) for x in R.edges] + [(r1.edges[y], bD.edges[y]) for y in D.edges]
                )
                n = 0 if pn is None or pe is None else count_morphisms(H, X, pn, pe)
                if n != 1:
                    rep.add(f"cocone into {X!r} via {aR!r}, {bD!r}: {n} mediating morphisms")
    return rep.finish()


def _verify_pullback(sq: PushbackResult, b: Bound) -> Report:
    l, m, d, l1 = (_plain(f) for f in (sq.l, sq.m, sq.d, sq.l1))
    K, L, D, G = l.dom, l.cod, d.cod, m.cod
    _check_size(K, L, D, G)
    rep = Report("pullback")
    if not _same(compose(m, l), compose(l1, d)):
        rep.add("square does not commute")
        return rep.finish()
    # preimage tables: a cone (aL, bD) is enumerated as aL first, then bD
    # among the l1-preimages of m o aL
    l1_node_pre, l1_edge_pre = _preimages(l1)
    l_node_pre, l_edge_pre = _preimages(l)
    d_node_pre, d_edge_pre = _preimages(d)
    for X in _candidates(b, K, L, D):
        for aL in iter_morphisms(X, L):
            an = {x: l1_node_pre.get(m.nodes[v], ()) for x, v in aL.nodes.items()}
            ae = {x: l1_edge_pre.get(m.edges[v], ()) for x, v in aL.edges.items()}
            for bD in iter_morphisms(X, D, allowed_nodes=an, allowed_edges=ae):
                rep.checked += 1
                tn = {x: l_node_pre.get(aL.nodes[x], frozenset()) & d_node_pre.get(bD.nodes[x], frozenset()) for x in X.nodes}
                te = {x: l_edge_pre.get(aL.edges[x], frozenset()) & d_edge_pre.get(bD.edges[x], frozenset()) for x in X.edges}
                n = count_morphisms(X, K, allowed_nodes=tn, allowed_edges=te)
                if n != 1:
                    rep.add(f"cone from {X!r} via {aL!r}, {bD!r}: {n} mediating morphisms")
    return rep.finish()


def _preimages(f: Morphism):
    nodes, edges = {}, {}
    for k, v in f.nodes.items():
        nodes.setdefault(v, set()).add(k)
    for k, v in f.edges.items():
        edges.setdefault(v, set()).add(k)
    return ({k: frozenset(v) for k, v in nodes.items()}, {k: frozenset(v) for k, v in edges.items()})


def pullback_complements(sq: PushbackResult, b: Bound):
    """Yield ``(D', d', l1')`` over the parametrized family of pullback
    complements of ``l`` and ``m``: ``D' = (K + Kbar) +e Ktilde`` with any
    ``Kbar`` within bound, any ``lbar: Kbar -> Lbar`` and up to ``b.edges``
    linking edges, each sent to a linking edge of ``m`` between the images
    of its endpoints (at least one endpoint in ``K``).

    For a polarized square, ``Kbar`` ranges over all its polarizations,
    ``lbar`` must preserve them, and every linking edge is a star edge.
    """
    polar = sq.polarized
    l, m = _plain(sq.l), _plain(sq.m)
    K, G = l.dom, m.cod
    Kp = sq.l.dom if polar else None
    Gp = sq.m.cod if polar else None
    dec = decompose_along_matching(m)
    lbar = dec.complement
    ltilde = dec.linking
    if polar:
        ltilde = {e: st for e, st in ltilde.items() if e in Gp.star}
    for shape in small_graphs(b.nodes, b.edges):
        # rename the shape away from K's identifiers
        ren = {n: ident(("kbar", str(n))) for n in shape.nodes}
        renE = {e: ident(("kbar", str(e))) for e in shape.edges}
        kbar = Graph._raw(
            frozenset(ren.values()),
            {renE[e]: (ren[s], ren[t]) for e, (s, t) in shape.ends.items()},
            {},
        )
        for pol in _polarizations(kbar) if polar else [None]:
            for lb in iter_morphisms(kbar, lbar):
                if pol is not None and not _preserves(pol, lb, Gp):
                    continue
                base_nodes = K.node_set | kbar.node_set
                l1n = {k: m.nodes[l.nodes[k]] for k in K.nodes}
                l1n.update(lb.nodes)
                l1e = {e: m.edges[l.edges[e]] for e in K.edges}
                l1e.update(lb.edges)
                pos = set(Kp.pos) | pol[0] if polar else set()
                neg = set(Kp.neg) | pol[1] if polar else set()
                slots = []
                for n in sorted(base_nodes, key=lambda i: i.key):
                    for p in sorted(base_nodes, key=lambda i: i.key):
                        if n not in K.node_set and p not in K.node_set:
                            continue
                        if polar and not (n in pos and p in neg):
                            continue
                        for e in G.between(l1n[n], l1n[p]):
                            if e in ltilde:
                                slots.append((n, p, e))
                for k in range(b.edges + 1):
                    for pick in itertools.combinations_with_replacement(slots, k):
                        ends = dict(K.ends)
                        ends.update(kbar.ends)
                        le = dict(l1e)
                        extra = []
                        for j, (n, p, e) in enumerate(pick):
                            x = ident(("ktilde", str(j)))
                            ends[x] = (n, p)
                            le[x] = e
                            extra.append(x)
                        Dg = Graph._raw(base_nodes, ends, {})
                        d1 = Morphism._raw(K, Dg, {k: k for k in K.nodes}, {e: e for e in K.edges})
                        l1x = Morphism._raw(Dg, G, l1n, le)
                        if polar:
                            star = set(Kp.star) | pol[2] | set(extra)
                            Dp = PolarizedGraph(Dg, pos, neg, star, check=False)
                            yield Dp, PolarizedMorphism(Kp, Dp, d1), PolarizedMorphism(Dp, Gp, l1x)
                        else:
                            yield Dg, d1, l1x


def _polarizations(g: Graph):
    nodes = g.nodes
    for signs in itertools.product(range(4), repeat=len(nodes)):
        pos = frozenset(n for n, s in zip(nodes, signs) if s & 1)
        neg = frozenset(n for n, s in zip(nodes, signs) if s & 2)
        eligible = [e for e in g.edges if g.ends[e][0] in pos and g.ends[e][1] in neg]
        for k in range(len(eligible) + 1):
            for star in itertools.combinations(eligible, k):
                yield pos, neg, frozenset(star)


def _preserves(pol, f: Morphism, cod: PolarizedGraph) -> bool:
    pos, neg, star = pol
    return (
        all(f.nodes[n] in cod.pos for n in pos)
        and all(f.nodes[n] in cod.neg for n in neg)
        and all(f.edges[e] in cod.star for e in star)
    )


def _delta_ok(delta: Morphism, src, dst) -> bool:
    if not isinstance(src, PolarizedGraph):
        return True
    return _preserves((src.pos, src.neg, src.star), delta, dst)


def _verify_terminal(sq: PushbackResult, b: Bound, rep: Report):
    d, l1 = _plain(sq.d), _plain(sq.l1)
    K, D = d.dom, d.cod
    family = [(sq.D, sq.d, sq.l1)]
    family.extend(pullback_complements(sq, b))
    node_pre, edge_pre = _preimages(l1)
    for Dx, dx, l1x in family:
        dxp, l1xp = _plain(dx), _plain(l1x)
        Dg = _carrier(Dx)
        fn = {dxp.nodes[k]: d.nodes[k] for k in K.nodes}
        fe = {dxp.edges[e]: d.edges[e] for e in K.edges}
        an = {x: node_pre.get(v, ()) for x, v in l1xp.nodes.items()}
        ae = {x: edge_pre.get(v, ()) for x, v in l1xp.edges.items()}
        rep.checked += 1
        n = 0
        for delta in iter_morphisms(Dg, D, fixed_nodes=fn, fixed_edges=fe, allowed_nodes=an, allowed_edges=ae):
            if _same(compose(l1, delta), l1xp) and _delta_ok(delta, Dx, sq.D):
                n += 1
        if n != 1:
            rep.add(f"pullback complement {Dx!r}: {n} comparison morphisms")
