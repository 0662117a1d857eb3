"""Hierarchical identifiers for nodes and edges.

An identifier is a nonempty path of atoms. An atom is either a plain name
or a triple tag ``(edge, src, tgt)`` recording where a constructed edge
came from. Tags render as ``e@n,p``; path atoms are joined with ``.``;
compound tag components are parenthesized, so ``(e@n,p)@n,q`` is a tag
whose edge component is itself a tag.
"""

from __future__ import annotations

import re
from typing import NamedTuple, Union

__all__ = ["Ident", "Tag", "ident", "tag", "fresh", "parse_ident"]

_NAME = re.compile(r"[\w']+")


class Tag(NamedTuple):
    edge: "Ident"
    src: "Ident"
    tgt: "Ident"


Atom = Union[str, Tag]


def _atom_key(atom):
    if isinstance(atom, Tag):
        return (1, atom.edge.key, atom.src.key, atom.tgt.key)
    return (0, atom)


class Ident(tuple):
    """A nonempty, totally ordered path of atoms."""

    def __new__(cls, atoms):
        atoms = tuple(atoms)
        if not atoms:
            raise ValueError("identifier needs at least one atom")
        for a in atoms:
            if isinstance(a, str):
                if not _NAME.fullmatch(a):
                    raise ValueError(f"bad name atom {a!r}")
            elif not isinstance(a, Tag):
                raise TypeError(f"bad atom {a!r}")
        return super().__new__(cls, atoms)

    @property
    def key(self):
        try:
            return self.__dict__["_key"]
        except KeyError:
            k = self.__dict__["_key"] = tuple(_atom_key(a) for a in self)
            return k

    def __lt__(self, other):
        return self.key < ident(other).key

    def __le__(self, other):
        return self.key <= ident(other).key

    def __gt__(self, other):
        return self.key > ident(other).key

    def __ge__(self, other):
        return self.key >= ident(other).key

    # tuple equality is kept so Ident(("a",)) == ("a",); plain strings are
    # coerced at API boundaries instead
    __hash__ = tuple.__hash__

    def is_plain(self) -> bool:
        return len(self) == 1 and isinstance(self[0], str)

    @property
    def tag(self) -> Tag | None:
        """The triple tag if this identifier is exactly one tag atom."""
        if len(self) == 1 and isinstance(self[0], Tag):
            return self[0]
        return None

    def __str__(self):
        return ".".join(_render_atom(a) for a in self)

    def __repr__(self):
        return f"Ident({str(self)!r})"


def _render_component(i: Ident) -> str:
    return str(i) if i.is_plain() else f"({i})"


def _render_atom(a: Atom) -> str:
    if isinstance(a, Tag):
        return "{}@{},{}".format(*(_render_component(c) for c in a))
    return a


def ident(x) -> Ident:
    """Coerce a string (parsed) or an existing identifier."""
    if isinstance(x, Ident):
        return x
    if isinstance(x, str):
        return parse_ident(x)
    if isinstance(x, Tag):
        return Ident((x,))
    if isinstance(x, tuple):
        return Ident(x)
    raise TypeError(f"cannot make an identifier from {x!r}")


def tag(edge, src, tgt) -> Ident:
    """Provenance identifier for an edge copied between ``src`` and ``tgt``.

    Re-tagging a copied edge keeps its original edge name and only updates
    the endpoints, so names stay short along a derivation.
    """
    edge, src, tgt = ident(edge), ident(src), ident(tgt)
    t = edge.tag
    if t is not None:
        edge = t.edge
    return Ident((Tag(edge, src, tgt),))


def fresh(i: Ident, taken) -> Ident:
    """Return ``i`` or the first primed variant of it not in ``taken``."""
    while i in taken:
        last = i[-1]
        if isinstance(last, str):
            i = Ident(i[:-1] + (last + "'",))
        else:
            i = Ident(i + ("'",))
    return i


class _Reader:
    def __init__(self, text: str, pos: int = 0):
        self.text = text
        self.pos = pos

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise ValueError(f"expected {ch!r} at offset {self.pos} in {self.text!r}")
        self.pos += 1

    def primary(self) -> Ident:
        if self.peek() == "(":
            self.pos += 1
            i = self.path()
            self.expect(")")
            return i
        m = _NAME.match(self.text, self.pos)
        if not m:
            raise ValueError(f"expected a name at offset {self.pos} in {self.text!r}")
        self.pos = m.end()
        return Ident((m.group(),))

    def atom(self) -> Atom:
        first = self.primary()
        if self.peek() != "@":
            if not first.is_plain():
                return Tag(*_unwrap_tag(first))
            return first[0]
        self.pos += 1
        src = self.primary()
        self.expect(",")
        tgt = self.primary()
        return Tag(first, src, tgt)

    def path(self) -> Ident:
        atoms = [self.atom()]
        while self.peek() == ".":
            self.pos += 1
            atoms.append(self.atom())
        return Ident(atoms)


def _unwrap_tag(i: Ident) -> Tag:
    # "(e@n,p)" standing alone as a path atom is just the tag
    if i.tag is None:
        raise ValueError(f"parenthesized path {i} cannot stand as an atom")
    return i.tag


def parse_ident(text: str, pos: int = 0, whole: bool = True):
    """Parse an identifier; with ``whole=False`` return ``(ident, end)``."""
    r = _Reader(text, pos)
    i = r.path()
    if whole:
        if r.pos != len(text):
            raise ValueError(f"trailing text in identifier {text!r}")
        return i
    return i, r.pos
