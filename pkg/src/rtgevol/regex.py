"""Content models as unranked trees.

A content model is a :class:`~rtgevol.trees.Tree` whose internal nodes are
``|`` (choice), ``.`` (concatenation) or ``*`` (star) and whose leaves are
non-terminal names or :data:`EPS`.  Matching goes through a Glushkov
position automaton so that every consumed symbol is tied to the leaf that
produced it.

Concrete syntax::

    R := R '|' R | R '.' R | R '*' | '(' R ')' | NAME | 'epsilon'

``.`` binds tighter than ``|`` and ``*`` binds tightest.  Operator nodes with
a single child cannot be written with infix syntax, so they are written in
prefix form: ``|(A)`` or ``.(A.B)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import islice
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import RegexSyntaxError
from .trees import Position, Tree, format_position

EPS = "ε"
CHOICE, CONCAT, STAR = "|", ".", "*"
OPERATORS = frozenset({CHOICE, CONCAT, STAR})
NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
KEYWORD = "epsilon"

DEFAULT_CAP = 64


def is_name(s: str) -> bool:
    return bool(NAME_RE.fullmatch(s)) and s != KEYWORD


def eps() -> Tree:
    return Tree(EPS)


def sym(name: str) -> Tree:
    return Tree(name)


def choice(*kids: Tree) -> Tree:
    return Tree(CHOICE, kids)


def concat(*kids: Tree) -> Tree:
    return Tree(CONCAT, kids)


def star(kid: Tree) -> Tree:
    return Tree(STAR, (kid,))


def nonterminals(r: Tree) -> FrozenSet[str]:
    """``nt(R)``: the non-terminals occurring in a content model."""
    return frozenset(n.label for _, n in r.items() if not n.children and n.label != EPS
                     and n.label not in OPERATORS)


def occurrences(r: Tree, name: str) -> List[Position]:
    """Leaf positions labelled ``name``, in preorder."""
    return [p for p, n in r.items() if not n.children and n.label == name]


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[|.*()])|(?P<eps>ε))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise RegexSyntaxError(f"unexpected character {text[pos]!r}", offset=pos, text=text)
        if m.group("name"):
            val = m.group("name")
            toks.append(("eps" if val == KEYWORD else "name", val, m.start("name")))
        elif m.group("eps"):
            toks.append(("eps", EPS, m.start("eps")))
        else:
            toks.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def regex_to_tree(text: str) -> Tree:
    """Parse regex syntax into its tree encoding."""
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, val=None):
        nonlocal i
        tok = toks[i]
        if (kind and tok[0] != kind) or (val is not None and tok[1] != val):
            want = val or kind
            got = tok[1] or "end of input"
            raise RegexSyntaxError(f"expected {want!r}, found {got!r}", offset=tok[2], text=text)
        i += 1
        return tok

    def alt() -> Tree:
        parts = [cat()]
        while peek()[:2] == ("op", CHOICE):
            take()
            parts.append(cat())
        return parts[0] if len(parts) == 1 else Tree(CHOICE, tuple(parts))

    def cat() -> Tree:
        parts = [post()]
        while peek()[:2] == ("op", CONCAT):
            take()
            parts.append(post())
        return parts[0] if len(parts) == 1 else Tree(CONCAT, tuple(parts))

    def post() -> Tree:
        node = atom()
        while peek()[:2] == ("op", STAR):
            take()
            node = Tree(STAR, (node,))
        return node

    def atom() -> Tree:
        kind, val, off = peek()
        if kind == "name":
            take()
            return Tree(val)
        if kind == "eps":
            take()
            return Tree(EPS)
        if kind == "op" and val == "(":
            take()
            node = alt()
            take("op", ")")
            return node
        if kind == "op" and val in (CHOICE, CONCAT):
            # prefix form of a unary operator node
            take()
            take("op", "(")
            node = alt()
            take("op", ")")
            return Tree(val, (node,))
        raise RegexSyntaxError(f"unexpected {val or 'end of input'!r}", offset=off, text=text)

    tree = alt()
    if peek()[0] != "end":
        raise RegexSyntaxError(f"trailing {peek()[1]!r}", offset=peek()[2], text=text)
    return tree


def tree_to_regex(t: Tree) -> str:
    """Serialize a content model with minimal parentheses."""
    label = t.label
    if not t.children:
        return KEYWORD if label == EPS else label
    if label == STAR:
        kid = t.children[0]
        inner = tree_to_regex(kid)
        if kid.label in (CHOICE, CONCAT) and len(kid.children) > 1:
            inner = f"({inner})"
        return inner + "*"
    if len(t.children) == 1:
        return f"{label}({tree_to_regex(t.children[0])})"
    parts = []
    for kid in t.children:
        s = tree_to_regex(kid)
        multi = len(kid.children) > 1
        if label == CONCAT and kid.label in (CHOICE, CONCAT) and multi:
            s = f"({s})"
        elif label == CHOICE and kid.label == CHOICE and multi:
            s = f"({s})"
        parts.append(s)
    return label.join(parts)


def arg_form(t: Tree) -> str:
    """Regex syntax for use as an operation argument: wrapped unless atomic."""
    s = tree_to_regex(t)
    if not t.children or (t.label == STAR and not t.children[0].children):
        return s
    return f"({s})"


# -- well-formedness ---------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    condition: str
    position: Position
    detail: str

    def __str__(self):
        return f"condition ({self.condition}) at {format_position(self.position)}: {self.detail}"


def check_regex(r: Tree, base: Position = ()) -> Optional[Violation]:
    """First violation of conditions (ii)/(iii) in a content model, if any."""
    for p, n in r.items():
        at = base + p
        if not n.children:
            if n.label in OPERATORS:
                return Violation("iii", at, f"operator {n.label!r} has no child")
            if n.label != EPS and not is_name(n.label):
                return Violation("ii", at, f"leaf {n.label!r} is not a non-terminal or ε")
            continue
        if n.label not in OPERATORS:
            return Violation("iii", at, f"internal node {n.label!r} is not an operator")
        if n.label == STAR and len(n.children) != 1:
            return Violation("iii", at, f"star node has {len(n.children)} children")
    return None


def is_well_formed(rule_tree: Tree) -> Tuple[bool, Optional[Violation]]:
    """Check a rule tree ``a(t_R)``: terminal root with one child, then the body."""
    root = rule_tree.label
    if root in OPERATORS or root == EPS or not is_name(root):
        return False, Violation("i", (), f"root {root!r} is not a terminal symbol")
    if len(rule_tree.children) != 1:
        return False, Violation("i", (), f"root has {len(rule_tree.children)} children")
    v = check_regex(rule_tree.children[0], (0,))
    return (v is None), v


def is_regex(r: Tree) -> bool:
    return check_regex(r) is None


# -- Glushkov automaton ------------------------------------------------------

@dataclass(frozen=True)
class Glushkov:
    """Position automaton: states are leaf positions labelled by non-terminals."""
    labels: Dict[Position, str]
    nullable: bool
    first: Tuple[Position, ...]
    last: FrozenSet[Position]
    follow: Dict[Position, Tuple[Position, ...]]

    def successors(self, state: Optional[Position]) -> Tuple[Position, ...]:
        return self.first if state is None else self.follow.get(state, ())

    def accepting(self, state: Optional[Position]) -> bool:
        return self.nullable if state is None else state in self.last

    def accepts_run(self, run: Sequence[Position]) -> bool:
        state = None
        for u in run:
            if u not in self.successors(state):
                return False
            state = u
        return self.accepting(state)


@lru_cache(maxsize=4096)
def glushkov(r: Tree) -> Glushkov:
    labels: Dict[Position, str] = {}
    follow: Dict[Position, set] = {}

    def walk(n: Tree, p: Position):
        # returns (nullable, first, last)
        if not n.children:
            if n.label == EPS:
                return True, set(), set()
            labels[p] = n.label
            follow.setdefault(p, set())
            return False, {p}, {p}
        subs = [walk(c, p + (i,)) for i, c in enumerate(n.children)]
        if n.label == CHOICE:
            return (any(s[0] for s in subs), set().union(*(s[1] for s in subs)),
                    set().union(*(s[2] for s in subs)))
        if n.label == STAR:
            nul, fi, la = subs[0]
            for x in la:
                follow[x] |= fi
            return True, set(fi), set(la)
        # concatenation
        for i, (_, _, la) in enumerate(subs):
            for j in range(i + 1, len(subs)):
                for x in la:
                    follow[x] |= subs[j][1]
                if not subs[j][0]:
                    break
        first, last = set(), set()
        for s in subs:
            first |= s[1]
            if not s[0]:
                break
        for s in reversed(subs):
            last |= s[2]
            if not s[0]:
                break
        return all(s[0] for s in subs), first, last

    nullable, first, last = walk(r, ())
    return Glushkov(labels, nullable, tuple(sorted(first)), frozenset(last),
                    {k: tuple(sorted(v)) for k, v in follow.items()})


def match_hedge(r: Tree, candidates: Sequence[Iterable[str]],
                offset: Position = ()) -> Iterator[Tuple[Position, ...]]:
    """Enumerate accepting runs for a hedge whose i-th element may be any of
    ``candidates[i]``.  Yields leaf-position sequences in lexicographic order.
    """
    g = glushkov(r)
    cands = [frozenset(c) for c in candidates]
    n = len(cands)
    memo: Dict[Tuple[int, Optional[Position]], bool] = {}

    def viable(i: int, state: Optional[Position]) -> bool:
        key = (i, state)
        if key not in memo:
            if i == n:
                memo[key] = g.accepting(state)
            else:
                memo[key] = any(g.labels[q] in cands[i] and viable(i + 1, q)
                                for q in g.successors(state))
        return memo[key]

    def runs(i: int, state: Optional[Position]):
        if i == n:
            yield ()
            return
        for q in g.successors(state):
            if g.labels[q] in cands[i] and viable(i + 1, q):
                for rest in runs(i + 1, q):
                    yield (offset + q,) + rest

    if viable(0, None):
        yield from runs(0, None)


def match_word(r: Tree, word: Sequence[str], cap: Optional[int] = DEFAULT_CAP,
               offset: Position = ()) -> Iterator[Tuple[Position, ...]]:
    """Match witnesses of ``word`` in ``L(r)``; each is the tuple of leaf
    positions consumed, shifted by ``offset`` (use ``(0,)`` for rule-tree
    coordinates)."""
    it = match_hedge(r, [(a,) for a in word], offset)
    return islice(it, cap) if cap is not None else it


def accepts(r: Tree, word: Sequence[str]) -> bool:
    return next(match_word(r, word, cap=1), None) is not None


def min_word(r: Tree) -> Tuple[str, ...]:
    """A shortest word of ``L(r)``; ties go to the leftmost alternative."""
    if not r.children:
        return () if r.label == EPS else (r.label,)
    if r.label == STAR:
        return ()
    if r.label == CONCAT:
        return tuple(a for c in r.children for a in min_word(c))
    best = None
    for c in r.children:
        w = min_word(c)
        if best is None or len(w) < len(best):
            best = w
    return best
