"""Regular tree grammars in normal form.

A :class:`Grammar` maps each non-terminal to one ``(terminal, content
model)`` pair.  The non-terminal and terminal sets are derived from the
rules, so they always contain all and only the symbols the rules mention.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from . import regex as rx
from .errors import ConflictingTerminal, EmptyLanguage, NotReduced, Unproductive
from .trees import Tree

Rule = Tuple[str, Tree]


@dataclass(frozen=True, eq=False)
class Grammar:
    rules: Mapping[str, Rule]
    starts: FrozenSet[str] = frozenset()
    _nts: FrozenSet[str] = field(init=False, repr=False)

    def __post_init__(self):
        rules = dict(sorted(self.rules.items()))
        object.__setattr__(self, "rules", rules)
        object.__setattr__(self, "starts", frozenset(self.starts))
        nts = set(rules)
        for _, body in rules.values():
            nts |= rx.nonterminals(body)
        object.__setattr__(self, "_nts", frozenset(nts))

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return self.rules == other.rules and self.starts == other.starts

    __hash__ = None

    def __repr__(self):
        return f"Grammar(starts={sorted(self.starts)}, rules={len(self.rules)})"

    @property
    def nonterminals(self) -> FrozenSet[str]:
        return self._nts

    @property
    def terminals(self) -> FrozenSet[str]:
        return frozenset(a for a, _ in self.rules.values())

    def term(self, x: str) -> str:
        return self.rules[x][0]

    def reg(self, x: str) -> Tree:
        return self.rules[x][1]

    def rule_tree(self, x: str) -> Tree:
        a, body = self.rules[x]
        return Tree(a, (body,))

    def with_rules(self, rules: Mapping[str, Rule], starts: Optional[Iterable[str]] = None) -> "Grammar":
        return Grammar(rules, self.starts if starts is None else frozenset(starts))

    def by_terminal(self) -> Dict[str, List[str]]:
        out: Dict[str, List[str]] = {}
        for x, (a, _) in self.rules.items():
            out.setdefault(a, []).append(x)
        return {a: sorted(xs) for a, xs in sorted(out.items())}

    def users(self, x: str) -> List[str]:
        """Non-terminals whose content model mentions ``x``."""
        return [y for y, (_, body) in self.rules.items() if x in rx.nonterminals(body)]


def grammar(rules: Mapping[str, Tuple[str, object]], starts: Iterable[str]) -> Grammar:
    """Convenience constructor accepting regex strings as bodies."""
    out = {}
    for x, (a, body) in rules.items():
        out[x] = (a, rx.regex_to_tree(body) if isinstance(body, str) else body)
    return Grammar(out, frozenset(starts))


# -- normal and reduced form -------------------------------------------------

def normalize(rules: Iterable[Tuple[str, str, Tree]], starts: Iterable[str] = ()) -> Grammar:
    """Merge rules sharing a left-hand side into one disjunction."""
    terms: Dict[str, str] = {}
    bodies: Dict[str, List[Tree]] = {}
    for x, a, body in rules:
        if x in terms and terms[x] != a:
            raise ConflictingTerminal(x, terms[x], a)
        terms[x] = a
        seen = bodies.setdefault(x, [])
        if body not in seen:
            seen.append(body)
    out = {}
    for x, bs in bodies.items():
        out[x] = (terms[x], bs[0] if len(bs) == 1 else rx.Tree(rx.CHOICE, tuple(bs)))
    return Grammar(out, frozenset(starts))


def rule_list(g: Grammar) -> List[Tuple[str, str, Tree]]:
    return [(x, a, body) for x, (a, body) in g.rules.items()]


def _productive_nts(g: Grammar) -> Set[str]:
    prod: Set[str] = set()

    def ok(r: Tree) -> bool:
        if not r.children:
            return r.label == rx.EPS or r.label in prod
        if r.label == rx.STAR:
            return True
        if r.label == rx.CONCAT:
            return all(ok(c) for c in r.children)
        return any(ok(c) for c in r.children)

    changed = True
    while changed:
        changed = False
        for x, (_, body) in g.rules.items():
            if x not in prod and ok(body):
                prod.add(x)
                changed = True
    return prod


def _prune(r: Tree, keep: Set[str]) -> Optional[Tree]:
    """Drop references to non-terminals outside ``keep`` (None means empty language)."""
    if not r.children:
        return r if (r.label == rx.EPS or r.label in keep) else None
    kids = [_prune(c, keep) for c in r.children]
    if r.label == rx.STAR:
        return r if kids[0] == r.children[0] else (Tree(rx.STAR, (kids[0],)) if kids[0] is not None else rx.eps())
    if r.label == rx.CONCAT:
        if any(k is None for k in kids):
            return None
        return Tree(r.label, tuple(kids))
    alive = [k for k in kids if k is not None]
    if not alive:
        return None
    if len(alive) == len(kids):
        return Tree(r.label, tuple(alive))
    return alive[0] if len(alive) == 1 else Tree(r.label, tuple(alive))


def _reachable(g: Grammar) -> Set[str]:
    seen: Set[str] = set()
    todo = [s for s in sorted(g.starts) if s in g.rules]
    while todo:
        x = todo.pop()
        if x in seen:
            continue
        seen.add(x)
        todo.extend(y for y in rx.nonterminals(g.reg(x)) if y in g.rules and y not in seen)
    return seen


def reduce(g: Grammar) -> Grammar:
    """Remove unproductive and unreachable non-terminals."""
    prod = _productive_nts(g)
    rules = {}
    for x, (a, body) in g.rules.items():
        if x in prod:
            rules[x] = (a, _prune(body, prod))
    g2 = Grammar(rules, frozenset(s for s in g.starts if s in prod))
    if not g2.starts:
        raise EmptyLanguage("no start symbol generates a terminal tree")
    live = _reachable(g2)
    return Grammar({x: r for x, r in g2.rules.items() if x in live}, g2.starts)


def reduction_problems(g: Grammar) -> List[str]:
    problems = []
    for s in sorted(g.starts):
        if s not in g.rules:
            problems.append(f"start symbol {s} has no rule")
    for x in sorted(g.nonterminals - set(g.rules)):
        problems.append(f"{x} is referenced but has no rule")
    prod = _productive_nts(g)
    for x in sorted(set(g.rules) - prod):
        problems.append(f"{x} is unproductive")
    live = _reachable(g)
    for x in sorted(set(g.rules) - live):
        problems.append(f"{x} is unreachable from the start symbols")
    return problems


def is_reduced(g: Grammar) -> bool:
    return not reduction_problems(g)


def check_reduced(g: Grammar) -> Grammar:
    problems = reduction_problems(g)
    if not g.starts:
        raise EmptyLanguage("grammar has no start symbol")
    if problems:
        raise NotReduced("; ".join(problems))
    return g


# -- local tree grammars -----------------------------------------------------

def competing_pairs(g: Grammar) -> Dict[str, Tuple[str, ...]]:
    """Terminal -> sorted tuple of the (two or more) non-terminals producing it."""
    return {a: tuple(xs) for a, xs in g.by_terminal().items() if len(xs) >= 2}


def is_ltg(g: Grammar) -> bool:
    return not competing_pairs(g)


# -- renaming and union ------------------------------------------------------

def rename_regex(r: Tree, mapping: Mapping[str, str]) -> Tree:
    if not r.children:
        return Tree(mapping.get(r.label, r.label)) if r.label != rx.EPS else r
    return Tree(r.label, tuple(rename_regex(c, mapping) for c in r.children))


def rename(g: Grammar, mapping: Mapping[str, str]) -> Grammar:
    rules = {mapping.get(x, x): (a, rename_regex(body, mapping)) for x, (a, body) in g.rules.items()}
    return Grammar(rules, frozenset(mapping.get(s, s) for s in g.starts))


def _closure(g: Grammar, x: str) -> Set[str]:
    seen: Set[str] = set()
    todo = [x]
    while todo:
        y = todo.pop()
        if y in seen or y not in g.rules:
            continue
        seen.add(y)
        todo.extend(rx.nonterminals(g.reg(y)))
    return seen


def _fresh(name: str, taken: Set[str]) -> str:
    k = 2
    while f"{name}_{k}" in taken:
        k += 1
    return f"{name}_{k}"


def union_grammars(gs: Sequence[Grammar]) -> Grammar:
    """Union of rule and start sets with name clashes resolved by suffixes.

    A non-terminal of a later grammar is shared with an earlier one of the
    same name only when every rule reachable from it is identical in both;
    otherwise it is renamed to ``X_k`` with the smallest free ``k``.
    """
    acc: Dict[str, Rule] = {}
    starts: Set[str] = set()
    for g in gs:
        taken = set(acc) | set(g.nonterminals)
        mapping: Dict[str, str] = {}
        for x in sorted(g.rules):
            if x not in acc:
                continue
            same = all(y in acc and acc[y] == g.rules[y] for y in _closure(g, x))
            if not same:
                new = _fresh(x, taken)
                taken.add(new)
                mapping[x] = new
        g2 = rename(g, mapping)
        for x, r in g2.rules.items():
            acc.setdefault(x, r)
        starts |= g2.starts
    return normalize([(x, a, b) for x, (a, b) in acc.items()], starts)


# -- minimal trees -----------------------------------------------------------

def _best_trees(g: Grammar) -> Dict[str, Tree]:
    best: Dict[str, Tuple[int, Tuple[str, ...], Tree]] = {}

    def word(r: Tree):
        # (size, preorder labels, hedge) of the best hedge for a content model
        if not r.children:
            if r.label == rx.EPS:
                return 0, (), ()
            b = best.get(r.label)
            return None if b is None else (b[0], b[1], (b[2],))
        if r.label == rx.STAR:
            return 0, (), ()
        subs = [word(c) for c in r.children]
        if r.label == rx.CONCAT:
            if any(s is None for s in subs):
                return None
            return (sum(s[0] for s in subs), tuple(l for s in subs for l in s[1]),
                    tuple(t for s in subs for t in s[2]))
        alive = [s for s in subs if s is not None]
        return min(alive, key=lambda s: (s[0], s[1])) if alive else None

    changed = True
    while changed:
        changed = False
        for x, (a, body) in g.rules.items():
            w = word(body)
            if w is None:
                continue
            cand = (1 + w[0], (a,) + w[1], Tree(a, w[2]))
            if x not in best or cand[:2] < best[x][:2]:
                best[x] = cand
                changed = True
    return {x: v[2] for x, v in best.items()}


def min_tree(g: Grammar, x: str) -> Tree:
    """Smallest tree derivable from ``x``; ties go to the smallest preorder label sequence."""
    best = _best_trees(g)
    if x not in best:
        raise Unproductive(x)
    return best[x]


def min_trees(g: Grammar) -> Dict[str, Tree]:
    return _best_trees(g)
