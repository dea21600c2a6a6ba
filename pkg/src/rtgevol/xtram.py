"""Document translation guided by a schema mapping.

A valid document is annotated with ``(p, A^u)`` pairs.  Each operation of
the mapping's script is then replayed on the annotation: positions ``u``
are carried through rule rewrites, and any node whose annotation no longer
fits the new grammar is repaired, first by re-annotating at no cost, then by
calling the corrector within the remaining budget.  Every surviving
correction opens a new branch.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from . import regex as rx
from . import editops as eo
from .corrector import Corrector, correct
from .derivation import Note, Witness, format_witness, witnesses
from .errors import InvalidDocument, NoSolution
from .grammar import Grammar
from .mapping import SchemaMapping
from .trees import Position, Tree, format_position, hedge_key, is_prefix, to_term

DEFAULT_CAP = 64
LOST: Note = (None, None)  # occurrence removed from its parent's rule

# corrector(subtree, non-terminal or None for the start symbols, grammar, budget)
CorrectorFn = Callable[[Tree, Optional[str], Grammar, int], List[Tuple[Tree, int]]]
# choose(op, position, [(tree, cost), ...]) -> index of the kept candidate
ChooseFn = Callable[[eo.EditOp, Position, List[Tuple[Tree, int]]], int]


@dataclass(frozen=True)
class AnnotatedTree:
    tree: Tree
    notes: Tuple[Tuple[Position, Note], ...]

    @classmethod
    def of(cls, tree: Tree, w: Witness) -> "AnnotatedTree":
        return cls(tree, tuple(sorted(w.items())))

    def as_dict(self) -> Witness:
        return dict(self.notes)

    def __getitem__(self, p: Position) -> Note:
        return self.as_dict()[p]

    def lines(self) -> List[str]:
        return format_witness(self.tree, self.as_dict())


@dataclass(frozen=True)
class Change:
    pos: Position
    before: Tree
    after: Tree
    cost: int

    def __str__(self):
        return (f"{format_position(self.pos)}: {to_term(self.before)} -> "
                f"{to_term(self.after)} (cost {self.cost})")


@dataclass(frozen=True)
class Step:
    op: str
    changes: Tuple[Change, ...] = ()


@dataclass(frozen=True)
class TranslationResult:
    result: Tree
    total_cost: int
    trace: Tuple[Step, ...]
    annotation: AnnotatedTree = field(compare=False, repr=False, default=None)

    def changed_steps(self) -> List[Step]:
        return [s for s in self.trace if s.changes]


@dataclass(frozen=True)
class Branch:
    tree: Tree
    notes: Tuple[Tuple[Position, Note], ...]
    cost: int
    trace: Tuple[Step, ...] = ()


def annotate(t: Tree, g: Grammar, cap: Optional[int] = DEFAULT_CAP) -> Iterator[AnnotatedTree]:
    it = witnesses(t, g, cap=cap)
    first = next(it, None)
    if first is None:
        raise InvalidDocument("document is not valid for the source grammar")
    yield AnnotatedTree.of(t, first)
    for w in it:
        yield AnnotatedTree.of(t, w)


# -- annotation remapping ----------------------------------------------------

def _remap_u(ed: eo.EditOp, u: Position) -> Optional[Position]:
    """New rule-tree position of an occurrence at ``u`` (None if deleted)."""
    if isinstance(ed, (eo.InsElm, eo.InsTree, eo.DelElm, eo.DelTree, eo.InsOpr, eo.DelOpr)):
        base, i = ed.pos[:-1], ed.pos[-1]
        d = len(base)
        if not is_prefix(base, u) or len(u) <= d:
            return u
        j, rest = u[d], u[d + 1:]
        if isinstance(ed, (eo.InsElm, eo.InsTree)):
            return base + (j + 1,) + rest if j >= i else u
        if isinstance(ed, (eo.DelElm, eo.DelTree)):
            if j == i:
                return None
            return base + (j - 1,) + rest if j > i else u
        if isinstance(ed, eo.InsOpr):
            if i <= j < i + ed.n:
                return base + (i, j - i) + rest
            return base + (j - ed.n + 1,) + rest if j >= i + ed.n else u
        # DelOpr
        if j == i:
            return base + (i + rest[0],) + rest[1:]
        return base + (j + ed.n - 1,) + rest if j > i else u
    return u


def _remap(ed: eo.EditOp, tree: Tree, ann: Witness) -> Tuple[Tree, Witness, List[Change]]:
    x = ed.target
    out: Witness = {}
    changes: List[Change] = []
    for p, (nt, u) in ann.items():
        if not p or nt is None or ann[p[:-1]][0] != x:
            out[p] = (nt, u)
            continue
        if isinstance(ed, eo.RelElm):
            if u == ed.pos:
                out[p] = LOST if ed.b == rx.EPS else (ed.b, u)
            else:
                out[p] = (nt, u)
            continue
        v = _remap_u(ed, u)
        out[p] = LOST if v is None else (nt, v)
    if isinstance(ed, eo.RelRoot):
        for p in sorted(out):
            if out[p][0] == ed.x and tree[p].label == ed.a:
                before = tree[p]
                tree = tree.relabel(p, ed.b)
                changes.append(Change(p, Tree(before.label), Tree(ed.b), 0))
    return tree, out, changes


# -- broken nodes and repair -------------------------------------------------

def _broken(tree: Tree, ann: Witness, g: Grammar, p: Position) -> bool:
    nt, _ = ann[p]
    if nt is None:
        return False
    if nt not in g.rules or g.term(nt) != tree[p].label:
        return True
    if not p and nt not in g.starts:
        return True
    body = g.reg(nt)
    run = []
    for i in range(len(tree[p].children)):
        cnt, cu = ann[p + (i,)]
        if cnt is None or not cu or cu[0] != 0 or not body.has(cu[1:]):
            return True
        leaf = body[cu[1:]]
        if leaf.children or leaf.label != cnt:
            return True
        run.append(cu[1:])
    return not rx.glushkov(body).accepts_run(run)


def _topmost_broken(tree: Tree, ann: Witness, g: Grammar) -> Optional[Position]:
    for p in tree.positions():
        if _broken(tree, ann, g, p):
            return p
    return None


def _graft(ann: Witness, p: Position, sub: Witness, keep: Note) -> Witness:
    out = {q: n for q, n in ann.items() if not is_prefix(p, q)}
    for q, n in sub.items():
        out[p + q] = n
    if p:
        out[p] = (sub[()][0], keep[1])
    return out


def default_corrector(sub: Tree, x: Optional[str], g: Grammar, budget: int,
                      cache: Optional[Dict] = None) -> List[Tuple[Tree, int]]:
    cor = None
    if cache is not None:
        cor = cache.setdefault(id(g), Corrector(g))
    return [(c.result, c.cost) for c in correct(sub, x, g, budget, max_results=None, corrector=cor)]


class _Stepper:
    def __init__(self, th: int, cap: int, corrector: Optional[CorrectorFn],
                 choose: Optional[ChooseFn]):
        self.th, self.cap, self.choose = th, cap, choose
        self._cache: Dict = {}
        self.corrector = corrector or (lambda s, x, g, b: default_corrector(s, x, g, b, self._cache))

    def repairs(self, tree: Tree, ann: Witness, g: Grammar, p: Position, budget: int, ed):
        """Alternatives for the subtree at ``p``: (tree, annotation, cost, change)."""
        nt, u = ann[p]
        sub = tree[p]
        roots = [nt] if p else sorted(g.starts)
        kids = [ann[p + (i,)][0] for i in range(len(sub.children))]

        # keep the children's non-terminals and only look for new positions
        out = []
        if all(k is not None for k in kids):
            for x in roots:
                if x not in g.rules or g.term(x) != sub.label:
                    continue
                for run in rx.match_hedge(g.reg(x), [(k,) for k in kids], offset=(0,)):
                    new = dict(ann)
                    new[p] = (x, u)
                    for i, v in enumerate(run):
                        new[p + (i,)] = (kids[i], v)
                    out.append((tree, new, 0, None))
                    if len(out) >= self.cap:
                        return out
        if out:
            return out

        # re-derive the whole subtree
        for w in witnesses(sub, g, [r for r in roots if r in g.rules], cap=self.cap):
            out.append((tree, _graft(ann, p, w, (nt, u)), 0, None))
        if out:
            return out

        cands = self.corrector(sub, nt if p else None, g, budget)
        cands = [c for c in cands if c[1] <= budget]
        cands.sort(key=lambda c: (c[1], hedge_key((c[0],))))
        if self.choose is not None and len(cands) > 1:
            cands = [cands[self.choose(ed, p, cands)]]
        for r, c in cands:
            new_tree = tree.replace(p, r) if p else r
            for w in witnesses(r, g, [r_ for r_ in roots if r_ in g.rules], cap=self.cap):
                out.append((new_tree, _graft(ann, p, w, (nt, u)), c, Change(p, sub, r, c)))
        return out

    def step(self, branches: Sequence[Branch], ed: eo.EditOp, g_after: Grammar) -> List[Branch]:
        best: Dict = {}
        for br in branches:
            tree, ann, changes = _remap(ed, br.tree, dict(br.notes))
            todo = [(tree, ann, br.cost, tuple(changes))]
            while todo:
                tree, ann, cost, ch = todo.pop()
                p = _topmost_broken(tree, ann, g_after)
                if p is None:
                    key = (tree, tuple(sorted(ann.items())))
                    if key not in best or cost < best[key].cost:
                        best[key] = Branch(tree, key[1], cost, br.trace + (Step(str(ed), ch),))
                    continue
                for t2, a2, c, change in self.repairs(tree, ann, g_after, p, self.th - cost, ed):
                    if cost + c <= self.th:
                        todo.append((t2, a2, cost + c, ch + ((change,) if change else ())))
        return sorted(best.values(), key=lambda b: (b.cost, hedge_key((b.tree,)), b.notes))


def translate_step(branches: Sequence[Branch], ed: eo.EditOp, g_before: Grammar, g_after: Grammar,
                   th: int, cap: int = DEFAULT_CAP, corrector: Optional[CorrectorFn] = None,
                   choose: Optional[ChooseFn] = None) -> List[Branch]:
    return _Stepper(th, cap, corrector, choose).step(branches, ed, g_after)


def translate(t: Tree, m: SchemaMapping, th: int, cap: int = DEFAULT_CAP,
              corrector: Optional[CorrectorFn] = None,
              choose: Optional[ChooseFn] = None) -> List[TranslationResult]:
    """Translate ``t`` from ``m.source`` to ``m.target`` with at most ``th`` edits per branch.

    One branch is started per annotation of ``t`` (up to ``cap``).  Results
    are deduplicated by tree, keeping the cheapest, and sorted by cost then
    preorder labels.
    """
    if th < 0:
        raise ValueError("threshold must be non-negative")
    branches = [Branch(a.tree, a.notes, 0) for a in annotate(t, m.source, cap)]
    stepper = _Stepper(th, cap, corrector, choose)
    g = m.source
    for ed in m.script:
        g_after = ed.apply(g)
        branches = stepper.step(branches, ed, g_after)
        if not branches:
            raise NoSolution(f"no translation within threshold {th} after {ed}")
        g = g_after
    results: Dict[Tree, TranslationResult] = {}
    for b in branches:
        r = TranslationResult(b.tree, b.cost, b.trace, AnnotatedTree(b.tree, b.notes))
        if b.tree not in results or b.cost < results[b.tree].total_cost:
            results[b.tree] = r
    out = sorted(results.values(), key=lambda r: (r.total_cost, hedge_key((r.result,))))
    if not out:
        raise NoSolution("no translation")
    return out
