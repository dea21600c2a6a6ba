"""Document validation with derivation witnesses.

A witness assigns to every document position the non-terminal that
generated it and the leaf position ``u`` of that non-terminal inside the
parent's rule tree (``None`` at the root).  This is exactly the ``(p, A^u)``
annotation used during translation.
"""
from __future__ import annotations

from itertools import islice
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from . import regex as rx
from .grammar import Grammar
from .trees import Position, Tree, format_position

Note = Tuple[str, Optional[Position]]
Witness = Dict[Position, Note]

DEFAULT_CAP = 64


def candidates(t: Tree, g: Grammar) -> Dict[Position, FrozenSet[str]]:
    """For every position, the non-terminals able to generate the subtree there."""
    out: Dict[Position, FrozenSet[str]] = {}
    by_term = g.by_terminal()

    def visit(node: Tree, p: Position) -> FrozenSet[str]:
        kids = [visit(c, p + (i,)) for i, c in enumerate(node.children)]
        ok = []
        for x in by_term.get(node.label, ()):
            if next(rx.match_hedge(g.reg(x), kids), None) is not None:
                ok.append(x)
        out[p] = frozenset(ok)
        return out[p]

    visit(t, ())
    return out


def generated_by(t: Tree, g: Grammar, x: str) -> bool:
    return x in candidates(t, g)[()]


def witnesses(t: Tree, g: Grammar, roots: Optional[Iterable[str]] = None,
              cap: Optional[int] = DEFAULT_CAP) -> Iterator[Witness]:
    """Enumerate derivation witnesses of ``t``.

    ``roots`` restricts the non-terminal at the root (default: start symbols).
    Order: root non-terminal by name, then runs in lexicographic position order.
    """
    cand = candidates(t, g)
    root_nts = sorted(g.starts if roots is None else roots)

    def node(sub: Tree, p: Position, x: str) -> Iterator[Witness]:
        kid_sets = [cand[p + (i,)] for i in range(len(sub.children))]
        for run in rx.match_hedge(g.reg(x), kid_sets, offset=(0,)):
            names = [g.reg(x)[u[1:]].label for u in run]
            yield from hedge(sub, p, run, names, 0)

    def hedge(sub: Tree, p: Position, run, names, i) -> Iterator[Witness]:
        if i == len(run):
            yield {}
            return
        q = p + (i,)
        for w in node(sub.children[i], q, names[i]):
            w = dict(w)
            w[q] = (names[i], run[i])
            for rest in hedge(sub, p, run, names, i + 1):
                merged = dict(w)
                merged.update(rest)
                yield merged

    def gen():
        for x in root_nts:
            if x in cand[()]:
                for w in node(t, (), x):
                    w = dict(w)
                    w[()] = (x, None)
                    yield w

    it = gen()
    return islice(it, cap) if cap is not None else it


def validate(t: Tree, g: Grammar, roots: Optional[Iterable[str]] = None) -> Optional[Witness]:
    """One derivation witness of ``t`` in ``L(g)``, or None when ``t`` is invalid."""
    return next(witnesses(t, g, roots, cap=1), None)


def is_valid(t: Tree, g: Grammar, roots: Optional[Iterable[str]] = None) -> bool:
    cand = candidates(t, g)[()]
    wanted = g.starts if roots is None else set(roots)
    return bool(cand & frozenset(wanted))


def format_witness(t: Tree, w: Witness) -> List[str]:
    """``(p, A^u)`` lines in document preorder."""
    lines = []
    for p in t.positions():
        x, u = w[p]
        lines.append(f"({format_position(p)}, {x})" if u is None
                     else f"({format_position(p)}, {x}^{format_position(u)})")
    return lines
