"""Graphviz DOT rendering of (polarized) graphs."""

from __future__ import annotations

from .graph import Graph
from .polarity import PolarizedGraph

__all__ = ["export_dot"]

_SIGN = {"+-": "±", "+": "+", "-": "-", "": ""}


def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(x, name: str = "G") -> str:
    """One ``digraph``; node names carry their sign, star edges are dashed.

    Parallel edges are emitted one statement each, so multiplicities show.
    """
    if isinstance(x, Graph):
        x = PolarizedGraph(x, check=False)
    g = x.graph
    lines = [f"digraph {_q(name)} {{"]
    for n in g.nodes:
        text = f"{n}{_SIGN[x.sign(n)]}"
        attrs = [f"label={_q(text)}"]
        if n in g.labels:
            attrs.append(f"tooltip={_q(g.labels[n])}")
        lines.append(f"  {_q(n)} [{', '.join(attrs)}];")
    for e in g.edges:
        s, t = g.ends[e]
        attrs = [f"label={_q(e)}"]
        if e in x.star:
            attrs.append("style=dashed")
        lines.append(f"  {_q(s)} -> {_q(t)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
