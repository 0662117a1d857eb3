"""Pushout, pullback, pushback and polarized pushback of multigraphs.

All four constructions are built pointwise on nodes and edges. Constructed
objects reuse the identifiers of their context part unchanged; items coming
from the rule side keep their own names unless they clash, in which case
they are primed. Copied linking edges are named by provenance tags.

Node labels are carried along for the matcher: a constructed node without a
label of its own takes the label of the node it stands for, when that label
is unambiguous.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Union

from .errors import InvalidSpan, NotMatching, SignatureMismatch, UnpolarizedLinkingEdge
from .graph import Graph, Morphism, compose, decompose_along_matching, is_monomorphism, validate_morphism
from .ident import fresh, tag
from .polarity import (
    PolarizedGraph,
    PolarizedMorphism,
    is_polarized_matching,
    validate_polarized_morphism,
)

__all__ = [
    "PushoutResult",
    "PushbackResult",
    "pushout",
    "pullback",
    "pushback",
    "polarized_pushback",
    "is_polarized_pullback",
    "linking_edges",
    "pushout_cardinality_violations",
    "pushback_cardinality_violations",
    "polarized_pushback_cardinality_violations",
    "validate_square",
]


@dataclass(frozen=True)
class PushoutResult:
    """The square ``h . r = r1 . d`` with ``H`` the pushout object."""

    r: Morphism
    d: Morphism
    H: Graph
    r1: Morphism
    h: Morphism


@dataclass(frozen=True)
class PushbackResult:
    """The square ``m . l = l1 . d``; polarized when built by :func:`polarized_pushback`."""

    l: Union[Morphism, PolarizedMorphism]
    m: Union[Morphism, PolarizedMorphism]
    D: Union[Graph, PolarizedGraph]
    l1: Union[Morphism, PolarizedMorphism]
    d: Union[Morphism, PolarizedMorphism]

    @property
    def polarized(self) -> bool:
        return isinstance(self.D, PolarizedGraph)


def _plain(f) -> Morphism:
    return f.underlying if isinstance(f, PolarizedMorphism) else f


def linking_edges(m: Morphism) -> dict:
    """Edges of ``m.cod`` joining the image of a monomorphism to the rest (or
    crossing between the two in any direction)."""
    return decompose_along_matching(m).linking


def _pair_counts(g: Graph, edges) -> Counter:
    return Counter(g.ends[e] for e in edges)


def _rename_into(items, taken: set) -> dict:
    """Map each identifier to itself or a primed variant avoiding ``taken``."""
    out = {}
    for i in items:
        j = fresh(i, taken)
        taken.add(j)
        out[i] = j
    return out


def _unique_label(labels) -> str | None:
    found = {x for x in labels if x is not None}
    return found.pop() if len(found) == 1 else None


def pushout(r: Morphism, d: Morphism) -> PushoutResult:
    """Pushout of ``R <-r- K -d-> D`` along a monomorphism ``d``.

    ``H = (R + Kbar) +e Rtilde`` where ``Kbar`` is the part of ``D`` outside
    ``d``'s image and ``Rtilde`` has one edge per linking edge of ``d``.
    """
    if r.dom != d.dom:
        raise SignatureMismatch("pushout needs a span with a common domain")
    if not is_monomorphism(d):
        raise NotMatching("pushout is only built along a monomorphism")
    R, K, D = r.cod, r.dom, d.cod
    dec = decompose_along_matching(d)
    kbar = dec.complement

    taken = set(kbar.node_set) | set(kbar.ends)
    hn = _rename_into(R.nodes, taken)
    he = _rename_into(R.edges, taken)

    d_inv = {v: k for k, v in d.nodes.items()}
    r1n = {}
    for n in D.nodes:
        r1n[n] = hn[r.nodes[d_inv[n]]] if n in d_inv else n
    de_inv = {v: k for k, v in d.edges.items()}
    r1e = {}
    for e in D.edges:
        if e in de_inv:
            r1e[e] = he[r.edges[de_inv[e]]]
        elif e in kbar.ends:
            r1e[e] = e
    rtilde = {}
    for e, (s, t) in dec.linking.items():
        ns, nt = r1n[s], r1n[t]
        x = fresh(tag(e, ns, nt), taken)
        taken.add(x)
        rtilde[x] = (ns, nt)
        r1e[e] = x

    ends = {he[e]: (hn[s], hn[t]) for e, (s, t) in R.ends.items()}
    ends.update(kbar.ends)
    ends.update(rtilde)
    labels = dict(kbar.labels)
    r_pre = {}
    for k in K.nodes:
        r_pre.setdefault(r.nodes[k], []).append(D.labels.get(d.nodes[k]))
    for n in R.nodes:
        lab = R.labels.get(n) or _unique_label(r_pre.get(n, ()))
        if lab is not None:
            labels[hn[n]] = lab
    H = Graph._raw(frozenset(hn.values()) | kbar.node_set, ends, labels)
    return PushoutResult(r, d, H, Morphism._raw(D, H, r1n, r1e), Morphism._raw(R, H, hn, he))


def pullback(m: Morphism, l1: Morphism) -> tuple[Graph, Morphism, Morphism]:
    """Pointwise pullback of ``L -m-> G <-l1- D``, returning ``(K, l, d)``.

    When ``m`` is injective every pair is determined by its ``D`` component,
    which then names it; otherwise pairs are named ``pb@a,b``.
    """
    if m.cod != l1.cod:
        raise SignatureMismatch("pullback needs a cospan with a common codomain")
    L, D = m.dom, l1.dom
    by_name = is_monomorphism(m)

    def name(a, b):
        return b if by_name else tag("pb", a, b)

    over = {}
    for b in D.nodes:
        over.setdefault(l1.nodes[b], []).append(b)
    ln, dn = {}, {}
    for a in L.nodes:
        for b in over.get(m.nodes[a], ()):
            k = name(a, b)
            ln[k], dn[k] = a, b
    pair_of = {(ln[k], dn[k]): k for k in ln}
    over_e = {}
    for b in D.edges:
        over_e.setdefault(l1.edges[b], []).append(b)
    le, de, ends = {}, {}, {}
    for a in L.edges:
        sa, ta = L.ends[a]
        for b in over_e.get(m.edges[a], ()):
            sb, tb = D.ends[b]
            k = name(a, b)
            le[k], de[k] = a, b
            ends[k] = (pair_of[(sa, sb)], pair_of[(ta, tb)])
    labels = {}
    for k in ln:
        lab = L.labels.get(ln[k]) or D.labels.get(dn[k])
        if lab is not None:
            labels[k] = lab
    K = Graph._raw(frozenset(ln), ends, labels)
    return K, Morphism._raw(K, L, ln, le), Morphism._raw(K, D, dn, de)


def _pushback_core(l: Morphism, m: Morphism, allow=None):
    """Shared construction; ``allow(n_D, p_D, e)`` filters copied edges."""
    if l.cod != m.dom:
        raise SignatureMismatch("pushback needs composable l and m")
    if not is_monomorphism(m):
        raise NotMatching("pushback is only built along a monomorphism")
    K, G = l.dom, m.cod
    dec = decompose_along_matching(m)
    lbar = dec.complement

    taken = set(lbar.node_set) | set(lbar.ends)
    dnm = _rename_into(K.nodes, taken)
    dem = _rename_into(K.edges, taken)

    l1n, l1e = {}, {}
    for k in K.nodes:
        l1n[dnm[k]] = m.nodes[l.nodes[k]]
    for e in K.edges:
        l1e[dem[e]] = m.edges[l.edges[e]]
    for n in lbar.nodes:
        l1n[n] = n
    for e in lbar.edges:
        l1e[e] = e

    pre = {}
    for n in sorted(l1n, key=lambda i: i.key):
        pre.setdefault(l1n[n], []).append(n)
    ktilde = {}
    for e, (s, t) in dec.linking.items():
        for nd in pre.get(s, ()):
            for pd in pre.get(t, ()):
                if allow is not None and not allow(nd, pd, e):
                    continue
                x = fresh(tag(e, nd, pd), taken)
                taken.add(x)
                ktilde[x] = (nd, pd)
                l1e[x] = e

    ends = {dem[e]: (dnm[s], dnm[t]) for e, (s, t) in K.ends.items()}
    ends.update(lbar.ends)
    ends.update(ktilde)
    labels = dict(lbar.labels)
    for k in K.nodes:
        lab = K.labels.get(k) or G.labels.get(l1n[dnm[k]])
        if lab is not None:
            labels[dnm[k]] = lab
    D = Graph._raw(frozenset(dnm.values()) | lbar.node_set, ends, labels)
    return D, Morphism._raw(D, G, l1n, l1e), Morphism._raw(K, D, dnm, dem), dnm, dem, lbar, ktilde


def pushback(l: Morphism, m: Morphism) -> PushbackResult:
    """Final pullback complement of ``K -l-> L -m-> G`` for a monomorphism ``m``.

    ``D = (K + Lbar) +e Ktilde``: every pair of ``D`` nodes gets one copy of
    each linking edge of ``m`` between their images.
    """
    D, l1, d, *_ = _pushback_core(l, m)
    return PushbackResult(l, m, D, l1, d)


def polarized_pushback(l: PolarizedMorphism, m: PolarizedMorphism) -> PushbackResult:
    """Polarized pushback: only positive sources and negative targets get copies.

    Every linking edge of ``m`` must be a star edge. Copies are star edges.
    """
    if not is_monomorphism(m.underlying) or not is_polarized_matching(m):
        raise NotMatching("polarized pushback needs a polarized matching")
    G = m.cod
    dec = decompose_along_matching(m.underlying)
    for e in dec.linking:
        if e not in G.star:
            raise UnpolarizedLinkingEdge(e)
    K = l.dom
    pos, neg = set(), set()

    def allow(nd, pd, e):
        return nd in pos and pd in neg

    # signs of D nodes are needed while copying; fill them before the edges
    lbar_nodes = dec.complement.node_set
    pos.update(n for n in lbar_nodes if n in G.pos)
    neg.update(n for n in lbar_nodes if n in G.neg)
    # K nodes keep their names unless they clash with the context
    taken = set(lbar_nodes) | set(dec.complement.ends)
    probe = _rename_into(K.nodes, taken)
    pos.update(probe[k] for k in K.pos)
    neg.update(probe[k] for k in K.neg)

    Dg, l1, d, dnm, dem, lbar, ktilde = _pushback_core(l.underlying, m.underlying, allow)
    assert dnm == probe
    star = {dem[e] for e in K.star} | {e for e in lbar.ends if e in G.star} | set(ktilde)
    Dp = PolarizedGraph(Dg, pos, neg, star, check=False)
    return PushbackResult(
        l,
        m,
        Dp,
        PolarizedMorphism(Dp, G, l1),
        PolarizedMorphism(K, Dp, d),
    )


def is_polarized_pullback(l: PolarizedMorphism, m: PolarizedMorphism, d: PolarizedMorphism, l1: PolarizedMorphism) -> bool:
    """Is ``m . l = l1 . d`` a pullback of polarized graphs whose linking edges
    (for ``m`` and for ``d``) are all star edges?"""
    if not is_monomorphism(m.underlying) or not is_monomorphism(d.underlying):
        raise NotMatching("both m and d must be matchings")
    try:
        for f in (l, m, d, l1):
            validate_polarized_morphism(f)
    except Exception:
        return False
    if l.cod != m.dom or d.dom != l.dom or l1.dom != d.cod or l1.cod != m.cod:
        return False
    lp, mp, dp, l1p = l.underlying, m.underlying, d.underlying, l1.underlying
    ml, l1d = compose(mp, lp), compose(l1p, dp)
    if ml.nodes != l1d.nodes or ml.edges != l1d.edges:
        return False
    K, L, D = l.dom, l.cod, d.cod
    # the comparison map K -> pointwise pullback must be bijective
    want = {(a, b) for a in L.nodes for b in D.nodes if mp.nodes[a] == l1p.nodes[b]}
    got = [(lp.nodes[k], dp.nodes[k]) for k in K.nodes]
    if len(set(got)) != len(got) or set(got) != want:
        return False
    want_e = {(a, b) for a in L.edges for b in D.edges if mp.edges[a] == l1p.edges[b]}
    got_e = [(lp.edges[k], dp.edges[k]) for k in K.edges]
    if len(set(got_e)) != len(got_e) or set(got_e) != want_e:
        return False
    # pullback polarization is the intersection of the two pulled-back ones
    for k in K.nodes:
        a, b = lp.nodes[k], dp.nodes[k]
        if (k in K.pos) != (a in L.pos and b in D.pos):
            return False
        if (k in K.neg) != (a in L.neg and b in D.neg):
            return False
    for k in K.edges:
        if (k in K.star) != (lp.edges[k] in L.star and dp.edges[k] in D.star):
            return False
    G = m.cod
    if any(e not in G.star for e in linking_edges(mp)):
        return False
    if any(e not in D.star for e in linking_edges(dp)):
        return False
    return True


def pushout_cardinality_violations(res: PushoutResult) -> list:
    """Node pairs of ``H`` where the copied-edge count differs from the sum
    of linking-edge counts over their ``r1`` preimages."""
    D, H = res.d.cod, res.H
    kt = _pair_counts(D, linking_edges(res.d))
    rt = _pair_counts(H, linking_edges(res.h))
    pre = {}
    for n in D.nodes:
        pre.setdefault(res.r1.nodes[n], []).append(n)
    out = []
    for nh in H.nodes:
        for ph in H.nodes:
            want = sum(kt.get((nd, pd), 0) for nd in pre.get(nh, ()) for pd in pre.get(ph, ()))
            if rt.get((nh, ph), 0) != want:
                out.append((nh, ph, rt.get((nh, ph), 0), want))
    return out


def pushback_cardinality_violations(res: PushbackResult) -> list:
    """Node pairs of ``D`` whose copied-edge count is wrong.

    Plain squares compare against all linking edges of ``m`` between the
    images; polarized squares against star ones, and only for a positive
    source and negative target (zero elsewhere).
    """
    l1, d, m = _plain(res.l1), _plain(res.d), _plain(res.m)
    D, G = l1.dom, l1.cod
    kt = _pair_counts(D, linking_edges(d))
    lt_edges = linking_edges(m)
    if res.polarized:
        lt_edges = [e for e in lt_edges if e in res.m.cod.star]
    lt = _pair_counts(G, lt_edges)
    out = []
    for nd in D.nodes:
        for pd in D.nodes:
            if res.polarized and not (nd in res.D.pos and pd in res.D.neg):
                want = 0
            else:
                want = lt.get((l1.nodes[nd], l1.nodes[pd]), 0)
            have = kt.get((nd, pd), 0)
            if have != want:
                out.append((nd, pd, have, want))
    return out


def polarized_pushback_cardinality_violations(res: PushbackResult) -> list:
    if not res.polarized:
        raise InvalidSpan("expected a polarized pushback square")
    return pushback_cardinality_violations(res)


def validate_square(res) -> None:
    """Check that the square's morphisms are valid and that it commutes."""
    if isinstance(res, PushoutResult):
        maps = [res.r, res.d, res.r1, res.h]
        left, right = compose(res.h, res.r), compose(res.r1, res.d)
    else:
        maps = [_plain(f) for f in (res.l, res.m, res.l1, res.d)]
        left, right = compose(maps[1], maps[0]), compose(maps[2], maps[3])
    for f in maps:
        validate_morphism(f)
    if left.nodes != right.nodes or left.edges != right.edges:
        raise InvalidSpan("square does not commute")
