"""Threshold-bounded correction of documents.

Documents change through three unit-cost operations: relabel a node,
insert a leaf, delete a leaf.  The root is never inserted or deleted, so
the induced distance is the top-down (Selkow) tree edit distance, where a
whole subtree is deleted or inserted at the price of its size.

:func:`correct` returns every tree (or hedge) valid for the requested target
whose distance from the input is within the threshold, each with a minimal
operation sequence.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import regex as rx
from .errors import RTGError
from .grammar import Grammar
from .trees import Position, Tree, format_position, hedge_key, to_term

Hedge = Tuple[Tree, ...]
DEFAULT_MAX_RESULTS = 256


@dataclass(frozen=True)
class DocEditOp:
    kind: str  # "relabel" | "insert" | "delete"
    pos: Position
    label: Optional[str] = None

    def __str__(self):
        p = format_position(self.pos)
        if self.kind == "delete":
            return f"delete({p})"
        return f"{self.kind}({p},{self.label})"


def relabel(pos: Position, label: str) -> DocEditOp:
    return DocEditOp("relabel", pos, label)


def insert_leaf(pos: Position, label: str) -> DocEditOp:
    return DocEditOp("insert", pos, label)


def delete_leaf(pos: Position) -> DocEditOp:
    return DocEditOp("delete", pos)


def apply_doc_op(t: Tree, op: DocEditOp) -> Tree:
    if op.kind == "relabel":
        if not t.has(op.pos):
            raise RTGError(f"no node at {format_position(op.pos)}")
        return t.relabel(op.pos, op.label)
    if not op.pos:
        raise RTGError("the root cannot be inserted or deleted")
    if op.kind == "insert":
        parent = op.pos[:-1]
        if not t.has(parent) or not 0 <= op.pos[-1] <= len(t[parent].children):
            raise RTGError(f"cannot insert at {format_position(op.pos)}")
        return t.insert(op.pos, Tree(op.label))
    if not t.has(op.pos) or t[op.pos].children:
        raise RTGError(f"no leaf at {format_position(op.pos)}")
    return t.delete(op.pos)


def apply_doc_ops(t: Tree, ops: Iterable[DocEditOp]) -> Tree:
    for op in ops:
        t = apply_doc_op(t, op)
    return t


def apply_hedge_ops(h: Sequence[Tree], ops: Iterable[DocEditOp]) -> Hedge:
    """Replay ops on a hedge by hanging it under a scratch root."""
    return apply_doc_ops(Tree("#", tuple(h)), ops).children


# -- distance ----------------------------------------------------------------

@lru_cache(maxsize=None)
def doc_distance(t1: Tree, t2: Tree) -> int:
    return (t1.label != t2.label) + hedge_distance(t1.children, t2.children)


@lru_cache(maxsize=None)
def hedge_distance(h1: Hedge, h2: Hedge) -> int:
    n, m = len(h1), len(h2)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        d[i][0] = d[i - 1][0] + h1[i - 1].size()
    for j in range(1, m + 1):
        d[0][j] = d[0][j - 1] + h2[j - 1].size()
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            d[i][j] = min(d[i - 1][j] + h1[i - 1].size(),
                          d[i][j - 1] + h2[j - 1].size(),
                          d[i - 1][j - 1] + doc_distance(h1[i - 1], h2[j - 1]))
    return d[n][m]


# -- corrections -------------------------------------------------------------

@dataclass(frozen=True)
class Correction:
    result: Union[Tree, Hedge]
    cost: int
    ops: Tuple[DocEditOp, ...]

    def __str__(self):
        if isinstance(self.result, Tree):
            return f"{self.cost}\t{to_term(self.result)}"
        return f"{self.cost}\t" + ",".join(to_term(t) for t in self.result)


class CorrectionList(list):
    truncated = False


def _key(c: Correction):
    h = (c.result,) if isinstance(c.result, Tree) else c.result
    return c.cost, hedge_key(h)


# Alignments record how a result was built, so that ops can be generated
# once positions are known:
#   tree alignment  = (new label or None, hedge alignment)
#   hedge alignment = tuple of ("del", tree) | ("ins", tree) | ("sub", tree alignment)


class Corrector:
    def __init__(self, g: Grammar):
        self.g = g
        self._trees: Dict = {}
        self._gen: Dict = {}

    # all trees of L(x) with at most k nodes
    def generate(self, x: str, k: int) -> List[Tree]:
        key = (x, k)
        if key not in self._gen:
            out: List[Tree] = []
            if k >= 1 and x in self.g.rules:
                a, body = self.g.rules[x]
                out = [Tree(a, h) for h in self._gen_hedges(body, k - 1)]
            self._gen[key] = out
        return self._gen[key]

    def _gen_hedges(self, r: Tree, k: int) -> List[Hedge]:
        aut = rx.glushkov(r)
        out: List[Hedge] = []

        def walk(state, k, acc):
            if aut.accepting(state):
                out.append(tuple(acc))
            for q in aut.successors(state):
                for t in self.generate(aut.labels[q], k):
                    walk(q, k - t.size(), acc + [t])

        walk(None, k, [])
        return out

    def trees(self, s: Tree, x: str, budget: int) -> Dict[Tree, Tuple[int, tuple]]:
        """Trees of ``L(x)`` within ``budget`` of ``s``: result -> (cost, alignment)."""
        key = (s, x, budget)
        if key in self._trees:
            return self._trees[key]
        out: Dict[Tree, Tuple[int, tuple]] = {}
        if x in self.g.rules:
            a, body = self.g.rules[x]
            c0 = int(s.label != a)
            if c0 <= budget:
                for h, (c, al) in self.hedges(s.children, body, budget - c0).items():
                    out[Tree(a, h)] = (c0 + c, (a if c0 else None, al))
        self._trees[key] = out
        return out

    def hedges(self, src: Hedge, r: Tree, budget: int) -> Dict[Hedge, Tuple[int, tuple]]:
        """Hedges of ``L(r)`` (over the grammar) within ``budget`` of ``src``."""
        aut = rx.glushkov(r)
        n = len(src)
        memo: Dict = {}

        def best(out, h, c, al):
            if h not in out or c < out[h][0]:
                out[h] = (c, al)

        def solve(i, state, b):
            key = (i, state, b)
            if key in memo:
                return memo[key]
            out: Dict[Hedge, Tuple[int, tuple]] = {}
            if i == n and aut.accepting(state):
                out[()] = (0, ())
            if i < n:
                size = src[i].size()
                if size <= b:
                    for h, (c, al) in solve(i + 1, state, b - size).items():
                        best(out, h, c + size, (("del", src[i]),) + al)
            for q in aut.successors(state):
                x = aut.labels[q]
                if i < n:
                    for t, (c, tal) in self.trees(src[i], x, b).items():
                        for h, (c2, al) in solve(i + 1, q, b - c).items():
                            best(out, (t,) + h, c + c2, (("sub", tal),) + al)
                for t in self.generate(x, b):
                    size = t.size()
                    for h, (c2, al) in solve(i, q, b - size).items():
                        best(out, (t,) + h, size + c2, (("ins", t),) + al)
            memo[key] = out
            return out

        return solve(0, None, budget)


def _tree_ops(p: Position, tal) -> List[DocEditOp]:
    label, hal = tal
    ops = [relabel(p, label)] if label is not None else []
    return ops + _hedge_ops(p, hal)


def _hedge_ops(p: Position, hal) -> List[DocEditOp]:
    ops: List[DocEditOp] = []
    j = 0
    for kind, val in hal:
        here = p + (j,)
        if kind == "del":
            ops.extend(delete_leaf(here + q) for q in reversed(list(val.positions())))
        elif kind == "ins":
            ops.extend(insert_leaf(here + q, n.label) for q, n in val.items())
            j += 1
        else:
            ops.extend(_tree_ops(here, val))
            j += 1
    return ops


def correct(t: Union[Tree, Sequence[Tree]], target: Union[str, Tree, None], g: Grammar, th: int,
            max_results: Optional[int] = DEFAULT_MAX_RESULTS,
            corrector: Optional[Corrector] = None) -> CorrectionList:
    """All corrections of ``t`` within ``th``.

    ``target`` is a non-terminal (``t`` is a tree, results are trees), a
    content model given as a regex tree (``t`` is a tree or a hedge, results
    are hedges), or None for any start symbol.
    """
    if th < 0:
        raise ValueError("threshold must be non-negative")
    cor = corrector or Corrector(g)
    found: List[Correction] = []
    if isinstance(target, Tree):
        src = (t,) if isinstance(t, Tree) else tuple(t)
        for h, (c, hal) in cor.hedges(src, target, th).items():
            found.append(Correction(h, c, tuple(_hedge_ops((), hal))))
    else:
        roots = sorted(g.starts) if target is None else [target]
        best: Dict[Tree, Tuple[int, tuple]] = {}
        for x in roots:
            for r, (c, tal) in cor.trees(t, x, th).items():
                if r not in best or c < best[r][0]:
                    best[r] = (c, tal)
        for r, (c, tal) in best.items():
            found.append(Correction(r, c, tuple(_tree_ops((), tal))))
    found.sort(key=_key)
    out = CorrectionList(found if max_results is None else found[:max_results])
    out.truncated = max_results is not None and len(found) > max_results
    return out
