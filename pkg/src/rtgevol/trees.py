"""Unranked labelled trees and dotted integer positions.

The same :class:`Tree` type carries XML documents, content models and rule
trees.  Positions are tuples of child indices; the root is ``()`` and is
written ``e`` in text.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence, Tuple

Position = Tuple[int, ...]
ROOT: Position = ()


@dataclass(frozen=True)
class Tree:
    label: str
    children: Tuple["Tree", ...] = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "_hash", hash((self.label, self.children)))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Tree({to_term(self)!r})"

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def positions(self) -> Iterator[Position]:
        """Positions in preorder."""
        yield ()
        for i, c in enumerate(self.children):
            for p in c.positions():
                yield (i,) + p

    def items(self) -> Iterator[Tuple[Position, "Tree"]]:
        yield (), self
        for i, c in enumerate(self.children):
            for p, n in c.items():
                yield (i,) + p, n

    def preorder_labels(self) -> Tuple[str, ...]:
        out = [self.label]
        for c in self.children:
            out.extend(c.preorder_labels())
        return tuple(out)

    def __getitem__(self, pos: Position) -> "Tree":
        node = self
        for i in pos:
            node = node.children[i]
        return node

    def has(self, pos: Position) -> bool:
        node = self
        for i in pos:
            if not 0 <= i < len(node.children):
                return False
            node = node.children[i]
        return True

    def replace(self, pos: Position, sub: "Tree") -> "Tree":
        """The tree ``t[pos <- sub]``."""
        if not pos:
            return sub
        i = pos[0]
        kids = list(self.children)
        kids[i] = kids[i].replace(pos[1:], sub)
        return Tree(self.label, tuple(kids))

    def with_children(self, pos: Position, kids: Sequence["Tree"]) -> "Tree":
        node = self[pos]
        return self.replace(pos, Tree(node.label, tuple(kids)))

    def relabel(self, pos: Position, label: str) -> "Tree":
        node = self[pos]
        return self.replace(pos, Tree(label, node.children))

    def insert(self, pos: Position, sub: "Tree") -> "Tree":
        """Insert ``sub`` so that it ends up at ``pos`` (shifting right siblings)."""
        parent, i = pos[:-1], pos[-1]
        kids = list(self[parent].children)
        if not 0 <= i <= len(kids):
            raise IndexError(f"cannot insert at {format_position(pos)}")
        kids.insert(i, sub)
        return self.with_children(parent, kids)

    def delete(self, pos: Position) -> "Tree":
        parent, i = pos[:-1], pos[-1]
        kids = list(self[parent].children)
        del kids[i]
        return self.with_children(parent, kids)


def leaf(label: str) -> Tree:
    return Tree(label)


def format_position(pos: Position) -> str:
    return ".".join(str(i) for i in pos) if pos else "e"


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("e", "ε", ""):
        return ()
    try:
        out = tuple(int(part) for part in text.split("."))
    except ValueError:
        raise ValueError(f"bad position {text!r}") from None
    if any(i < 0 for i in out):
        raise ValueError(f"bad position {text!r}")
    return out


def is_prefix(p: Position, q: Position) -> bool:
    return q[: len(p)] == p


def to_term(t: Tree) -> str:
    """Compact term syntax, e.g. ``bill(SSN,item(trId,price),date)``."""
    if not t.children:
        return t.label
    return f"{t.label}({','.join(to_term(c) for c in t.children)})"


def from_term(text: str) -> Tree:
    """Parse the term syntax produced by :func:`to_term`."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node() -> Tree:
        nonlocal pos
        skip()
        start = pos
        while pos < len(text) and text[pos] not in "()," and not text[pos].isspace():
            pos += 1
        label = text[start:pos]
        if not label:
            raise ValueError(f"expected a label at offset {start} in {text!r}")
        skip()
        kids = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            while True:
                kids.append(node())
                skip()
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                if pos < len(text) and text[pos] == ")":
                    pos += 1
                    break
                raise ValueError(f"expected ',' or ')' at offset {pos} in {text!r}")
        return Tree(label, tuple(kids))

    t = node()
    skip()
    if pos != len(text):
        raise ValueError(f"trailing input at offset {pos} in {text!r}")
    return t


def hedge_key(hedge: Sequence[Tree]):
    """Sort key for hedges: preorder labels first, then exact shape."""
    labels = tuple(l for t in hedge for l in t.preorder_labels())
    return labels, tuple(to_term(t) for t in hedge)
