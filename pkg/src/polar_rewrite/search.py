"""Backtracking search for graph morphisms.

Cost is exponential; callers bound sizes. Results come out in canonical
order: node maps lexicographically (domain nodes in identifier order, images
in identifier order), then edge maps the same way.
"""

from __future__ import annotations

from typing import Iterator, Mapping

from .errors import SizeBoundExceeded
from .graph import Graph, Morphism
from .ident import ident

__all__ = ["enumerate_morphisms", "iter_morphisms", "count_morphisms", "are_isomorphic", "find_matchings"]


def _plan(x: Graph):
    order = x.nodes
    pos = {n: i for i, n in enumerate(order)}
    # edges checked when the later of their endpoints is assigned
    checks = [[] for _ in order]
    for e in x.edges:
        s, t = x.ends[e]
        checks[max(pos[s], pos[t])].append((s, t))
    return order, checks


def _node_maps(
    x: Graph, y: Graph, monic: bool, labels: bool, fixed: Mapping | None, allowed: Mapping | None = None
) -> Iterator[dict]:
    order, checks = _plan(x)
    ycands = y.nodes
    if monic and len(order) > len(ycands):
        return
    parallel = {}
    if monic:
        for e in x.edges:
            parallel[x.ends[e]] = parallel.get(x.ends[e], 0) + 1
    cands = []
    for n in order:
        if fixed and n in fixed:
            c = (fixed[n],) if fixed[n] in y.node_set else ()
        else:
            c = ycands
        if allowed and n in allowed:
            c = tuple(v for v in c if v in allowed[n])
        if labels:
            want = x.labels.get(n)
            if want is not None:
                c = tuple(v for v in c if y.labels.get(v) == want)
        if not c:
            return
        cands.append(c)

    f: dict = {}
    used: set = set()
    k = len(order)

    def rec(i):
        if i == k:
            yield dict(f)
            return
        n = order[i]
        for v in cands[i]:
            if monic and v in used:
                continue
            f[n] = v
            ok = True
            for s, t in checks[i]:
                have = len(y.between(f[s], f[t]))
                if have == 0 or (monic and have < parallel[(s, t)]):
                    ok = False
                    break
            if ok:
                if monic:
                    used.add(v)
                yield from rec(i + 1)
                if monic:
                    used.discard(v)
            del f[n]

    yield from rec(0)


def _edge_choices(x: Graph, y: Graph, nmap: dict, e, fixed, allowed) -> tuple:
    s, t = x.ends[e]
    c = y.between(nmap[s], nmap[t])
    if fixed and e in fixed:
        c = (fixed[e],) if fixed[e] in c else ()
    if allowed and e in allowed:
        c = tuple(v for v in c if v in allowed[e])
    return c


def _edge_maps(
    x: Graph, y: Graph, nmap: dict, monic: bool, fixed: Mapping | None, allowed: Mapping | None = None
) -> Iterator[dict]:
    edges = x.edges
    choices = []
    for e in edges:
        c = _edge_choices(x, y, nmap, e, fixed, allowed)
        if not c:
            return
        choices.append(c)
    g: dict = {}
    used: set = set()
    k = len(edges)

    def rec(i):
        if i == k:
            yield dict(g)
            return
        e = edges[i]
        for c in choices[i]:
            if monic and c in used:
                continue
            g[e] = c
            if monic:
                used.add(c)
            yield from rec(i + 1)
            if monic:
                used.discard(c)
        g.pop(e, None)

    yield from rec(0)


def iter_morphisms(
    x: Graph,
    y: Graph,
    monic_only: bool = False,
    label_respecting: bool = False,
    fixed_nodes: Mapping | None = None,
    fixed_edges: Mapping | None = None,
    allowed_nodes: Mapping | None = None,
    allowed_edges: Mapping | None = None,
) -> Iterator[Morphism]:
    """Lazily yield morphisms ``x -> y``.

    ``fixed_*`` pin single images; ``allowed_*`` map items to the sets of
    images they may take.
    """
    if fixed_nodes:
        fixed_nodes = {ident(k): ident(v) for k, v in fixed_nodes.items()}
    if fixed_edges:
        fixed_edges = {ident(k): ident(v) for k, v in fixed_edges.items()}
    for nmap in _node_maps(x, y, monic_only, label_respecting, fixed_nodes, allowed_nodes):
        for emap in _edge_maps(x, y, nmap, monic_only, fixed_edges, allowed_edges):
            yield Morphism._raw(x, y, nmap, emap)


def enumerate_morphisms(
    x: Graph,
    y: Graph,
    monic_only: bool = False,
    label_respecting: bool = False,
    limit: int | None = None,
) -> list[Morphism]:
    out = []
    for f in iter_morphisms(x, y, monic_only, label_respecting):
        out.append(f)
        if limit is not None and len(out) > limit:
            raise SizeBoundExceeded(limit)
    return out


def count_morphisms(
    x: Graph,
    y: Graph,
    fixed_nodes: Mapping | None = None,
    fixed_edges: Mapping | None = None,
    allowed_nodes: Mapping | None = None,
    allowed_edges: Mapping | None = None,
) -> int:
    """Number of (not necessarily injective) morphisms, without materializing edge maps."""
    total = 0
    for nmap in _node_maps(x, y, False, False, fixed_nodes, allowed_nodes):
        prod = 1
        for e in x.edges:
            prod *= len(_edge_choices(x, y, nmap, e, fixed_edges, allowed_edges))
            if not prod:
                break
        total += prod
    return total


def _degree_profile(g: Graph):
    outd = {n: 0 for n in g.nodes}
    ind = dict(outd)
    loops = dict(outd)
    for s, t in g.ends.values():
        outd[s] += 1
        ind[t] += 1
        if s == t:
            loops[s] += 1
    return sorted((outd[n], ind[n], loops[n]) for n in g.nodes)


def are_isomorphic(x: Graph, y: Graph, label_respecting: bool = False) -> Morphism | None:
    """A witness isomorphism ``x -> y`` (first in canonical order) or None."""
    if len(x.nodes) != len(y.nodes) or len(x.edges) != len(y.edges):
        return None
    if _degree_profile(x) != _degree_profile(y):
        return None
    if label_respecting and sorted(x.labels.values()) != sorted(y.labels.values()):
        return None
    for f in iter_morphisms(x, y, monic_only=True, label_respecting=label_respecting):
        if label_respecting and any(y.labels.get(f.nodes[n]) != x.labels.get(n) for n in x.nodes):
            continue
        return f
    return None


def find_matchings(lhs: Graph, g: Graph) -> list[Morphism]:
    """All label-respecting injective morphisms ``lhs -> g`` in canonical order."""
    return list(iter_morphisms(lhs, g, monic_only=True, label_respecting=True))
