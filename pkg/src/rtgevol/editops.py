"""Grammar edit operations.

Every operation rewrites the rule tree ``t^r_X = a(t_R)`` of one
non-terminal, or changes the start set or the rule set.  Positions are
taken in rule-tree coordinates: the terminal root is ``e`` and the content
model sits at ``0``.  An operation written ``op(X, ..., u.i)`` acts on the
``i``-th child of the node at ``u``.

Rule insertions and deletions carry a ``start`` flag recording whether the
non-terminal is (or was) a start symbol.  Insertions default to ``True``;
deletions default to ``False`` and are only defined when the flag matches
the grammar.  This makes each operation an exact inverse of its partner.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, List, Optional, Tuple

from . import regex as rx
from .errors import DanglingReference, NotDefined, RegexSyntaxError
from .grammar import Grammar
from .trees import Position, Tree, format_position, parse_position

ELEMENTARY_COST = 1
NON_ELEMENTARY_COST = 5


class EditOp:
    kind: ClassVar[str]
    elementary: ClassVar[bool] = True

    # rule being rewritten, when the op targets a single rule
    @property
    def target(self) -> Optional[str]:
        return getattr(self, "x", None)

    def apply(self, g: Grammar) -> Grammar:
        raise NotImplementedError

    def inverse(self) -> "EditOp":
        raise NotImplementedError

    def args(self) -> List[str]:
        raise NotImplementedError

    def __str__(self):
        return f"{self.kind}({','.join(self.args())})"

    def fail(self, reason: str):
        raise NotDefined(self.kind, reason)


# -- helpers -----------------------------------------------------------------

def _rule_tree(op: EditOp, g: Grammar, x: str) -> Tree:
    if x not in g.rules:
        op.fail(f"{x} has no production rule")
    return g.rule_tree(x)


def _set_rule(g: Grammar, x: str, rt: Tree, starts=None) -> Grammar:
    rules = dict(g.rules)
    rules[x] = (rt.label, rt.children[0])
    return g.with_rules(rules, starts)


def _split(op: EditOp, pos: Position) -> Tuple[Position, int]:
    if not pos:
        op.fail("position must have the form u.i")
    return pos[:-1], pos[-1]


def _node(op: EditOp, rt: Tree, pos: Position) -> Tree:
    if not rt.has(pos):
        op.fail(f"no node at {format_position(pos)} in the rule of {op.target}")
    return rt[pos]


def _symbol_ok(op: EditOp, g: Grammar, a: str, extra=()):
    if a != rx.EPS and a not in g.nonterminals and a not in extra:
        op.fail(f"{a} is not a non-terminal of the grammar")


def _check_name(op: EditOp, name: str, what: str):
    if not rx.is_name(name):
        op.fail(f"{name!r} is not a valid {what} name")


def _users(g: Grammar, a: str) -> List[str]:
    return [y for y in g.users(a) if y != a]


# -- start symbols -----------------------------------------------------------

@dataclass(frozen=True)
class SetStart(EditOp):
    a: str
    kind: ClassVar[str] = "set_startelm"

    def apply(self, g):
        if self.a not in g.nonterminals:
            self.fail(f"{self.a} is not a non-terminal")
        if self.a in g.starts:
            self.fail(f"{self.a} is already a start symbol")
        return g.with_rules(g.rules, g.starts | {self.a})

    def inverse(self):
        return UnsetStart(self.a)

    def args(self):
        return [self.a]


@dataclass(frozen=True)
class UnsetStart(EditOp):
    a: str
    kind: ClassVar[str] = "unset_startelm"

    def apply(self, g):
        if self.a not in g.starts:
            self.fail(f"{self.a} is not a start symbol")
        return g.with_rules(g.rules, g.starts - {self.a})

    def inverse(self):
        return SetStart(self.a)

    def args(self):
        return [self.a]


# -- symbols in content models -----------------------------------------------

@dataclass(frozen=True)
class InsElm(EditOp):
    x: str
    a: str
    pos: Position
    kind: ClassVar[str] = "ins_elm"

    def apply(self, g):
        rt = _rule_tree(self, g, self.x)
        u, i = _split(self, self.pos)
        parent = _node(self, rt, u)
        if parent.label not in (rx.CHOICE, rx.CONCAT) or not u:
            self.fail(f"node at {format_position(u)} is not a choice or concatenation")
        if not 0 <= i <= len(parent.children):
            self.fail(f"index {i} out of range")
        _symbol_ok(self, g, self.a)
        return _set_rule(g, self.x, rt.insert(self.pos, Tree(self.a)))

    def inverse(self):
        return DelElm(self.x, self.a, self.pos)

    def args(self):
        return [self.x, _sym(self.a), format_position(self.pos)]


@dataclass(frozen=True)
class DelElm(EditOp):
    x: str
    a: str
    pos: Position
    kind: ClassVar[str] = "del_elm"

    def apply(self, g):
        rt = _rule_tree(self, g, self.x)
        u, i = _split(self, self.pos)
        node = _node(self, rt, self.pos)
        if node.children or node.label != self.a:
            self.fail(f"node at {format_position(self.pos)} is not a leaf {_sym(self.a)}")
        parent = rt[u]
        if not u or parent.label not in (rx.CHOICE, rx.CONCAT):
            self.fail("parent is not a choice or concatenation")
        if len(parent.children) < 2:
            self.fail("parent would be left without children")
        return _set_rule(g, self.x, rt.delete(self.pos))

    def inverse(self):
        return InsElm(self.x, self.a, self.pos)

    def args(self):
        return [self.x, _sym(self.a), format_position(self.pos)]


@dataclass(frozen=True)
class RelRoot(EditOp):
    x: str
    a: str
    b: str
    kind: ClassVar[str] = "rel_root"

    def apply(self, g):
        rt = _rule_tree(self, g, self.x)
        if rt.label != self.a:
            self.fail(f"{self.x} produces {rt.label}, not {self.a}")
        _check_name(self, self.b, "terminal")
        return _set_rule(g, self.x, Tree(self.b, rt.children))

    def inverse(self):
        return RelRoot(self.x, self.b, self.a)

    def args(self):
        return [self.x, self.a, self.b]


@dataclass(frozen=True)
class RelElm(EditOp):
    x: str
    a: str
    b: str
    pos: Position
    kind: ClassVar[str] = "rel_elm"

    def apply(self, g):
        rt = _rule_tree(self, g, self.x)
        node = _node(self, rt, self.pos)
        if not self.pos or node.children or node.label != self.a:
            self.fail(f"node at {format_position(self.pos)} is not a leaf {_sym(self.a)}")
        _symbol_ok(self, g, self.b)
        return _set_rule(g, self.x, rt.relabel(self.pos, self.b))

    def inverse(self):
        return RelElm(self.x, self.b, self.a, self.pos)

    def args(self):
        return [self.x, _sym(self.a), _sym(self.b), format_position(self.pos)]


# -- operators in content models ---------------------------------------------

@dataclass(frozen=True)
class InsOpr(EditOp):
    x: str
    opr: str
    pos: Position
    n: int
    kind: ClassVar[str] = "ins_opr"

    def apply(self, g):
        rt = _rule_tree(self, g, self.x)
        u, i = _split(self, self.pos)
        parent = _node(self, rt, u)
        if self.opr not in rx.OPERATORS:
            self.fail(f"{self.opr!r} is not an operator")
        if self.n < 1:
            self.fail("must wrap at least one child")
        if self.n > 1 and self.opr == rx.STAR:
            self.fail("a star can wrap a single child only")
        if parent.children == () or i < 0 or i + self.n > len(parent.children):
            self.fail(f"node at {format_position(u)} has no children {i}..{i + self.n - 1}")
        kids = list(parent.children)
        wrapped = Tree(self.opr, tuple(kids[i:i + self.n]))
        kids[i:i + self.n] = [wrapped]
        return _set_rule(g, self.x, rt.with_children(u, kids))

    def inverse(self):
        return DelOpr(self.x, self.opr, self.pos, self.n)

    def args(self):
        return [self.x, self.opr, format_position(self.pos), str(self.n)]


@dataclass(frozen=True)
class DelOpr(EditOp):
    x: str
    opr: str
    pos: Position
    n: int
    kind: ClassVar[str] = "del_opr"

    def apply(self, g):
        rt = _rule_tree(self, g, self.x)
        u, i = _split(self, self.pos)
        node = _node(self, rt, self.pos)
        if node.label != self.opr or self.opr not in rx.OPERATORS:
            self.fail(f"node at {format_position(self.pos)} is not {self.opr!r}")
        if len(node.children) != self.n:
            self.fail(f"node has {len(node.children)} children, not {self.n}")
        parent = rt[u]
        if (not u or parent.label == rx.STAR) and self.n != 1:
            self.fail("below a star or the rule root only a unary operator can be removed")
        kids = list(parent.children)
        kids[i:i + 1] = list(node.children)
        return _set_rule(g, self.x, rt.with_children(u, kids))

    def inverse(self):
        return InsOpr(self.x, self.opr, self.pos, self.n)

    def args(self):
        return [self.x, self.opr, format_position(self.pos), str(self.n)]


@dataclass(frozen=True)
class RelOpr(EditOp):
    x: str
    op: str
    opr: str
    pos: Position
    kind: ClassVar[str] = "rel_opr"

    def apply(self, g):
        rt = _rule_tree(self, g, self.x)
        node = _node(self, rt, self.pos)
        if node.label != self.op or self.op not in rx.OPERATORS or not self.pos:
            self.fail(f"node at {format_position(self.pos)} is not {self.op!r}")
        if self.opr not in rx.OPERATORS:
            self.fail(f"{self.opr!r} is not an operator")
        if self.opr == rx.STAR and len(node.children) != 1:
            self.fail("a star needs exactly one child")
        return _set_rule(g, self.x, rt.relabel(self.pos, self.opr))

    def inverse(self):
        return RelOpr(self.x, self.opr, self.op, self.pos)

    def args(self):
        return [self.x, self.op, self.opr, format_position(self.pos)]


# -- production rules --------------------------------------------------------

@dataclass(frozen=True)
class InsRule(EditOp):
    a: str
    term: str
    start: bool = True
    kind: ClassVar[str] = "ins_rule"

    @property
    def target(self):
        return self.a

    def apply(self, g):
        if self.a in g.nonterminals:
            self.fail(f"{self.a} already exists")
        _check_name(self, self.a, "non-terminal")
        _check_name(self, self.term, "terminal")
        rules = dict(g.rules)
        rules[self.a] = (self.term, rx.eps())
        return g.with_rules(rules, g.starts | {self.a} if self.start else g.starts)

    def inverse(self):
        return DelRule(self.a, self.term, self.start)

    def args(self):
        return [self.a, self.term] + ([] if self.start else ["nostart"])


@dataclass(frozen=True)
class DelRule(EditOp):
    a: str
    term: str
    start: bool = False
    kind: ClassVar[str] = "del_rule"

    @property
    def target(self):
        return self.a

    def apply(self, g):
        if self.a not in g.rules:
            self.fail(f"{self.a} has no production rule")
        t, body = g.rules[self.a]
        if t != self.term:
            self.fail(f"{self.a} produces {t}, not {self.term}")
        if body != rx.eps():
            self.fail(f"content model of {self.a} is not ε")
        _check_start(self, g)
        users = _users(g, self.a)
        if users:
            raise DanglingReference(self.kind, self.a, users[0])
        rules = dict(g.rules)
        del rules[self.a]
        return g.with_rules(rules, g.starts - {self.a})

    def inverse(self):
        return InsRule(self.a, self.term, self.start)

    def args(self):
        return [self.a, self.term] + (["start"] if self.start else [])


def _check_start(op, g: Grammar):
    if (op.a in g.starts) != op.start:
        if op.start:
            op.fail(f"{op.a} is not a start symbol")
        op.fail(f"{op.a} is a start symbol (write the 'start' flag)")


# -- non-elementary ----------------------------------------------------------

@dataclass(frozen=True)
class InsTree(EditOp):
    x: str
    r: Tree
    pos: Position
    kind: ClassVar[str] = "ins_tree"
    elementary: ClassVar[bool] = False

    def apply(self, g):
        rt = _rule_tree(self, g, self.x)
        u, i = _split(self, self.pos)
        parent = _node(self, rt, u)
        if not u or parent.label not in (rx.CHOICE, rx.CONCAT):
            self.fail(f"node at {format_position(u)} is not a choice or concatenation")
        if not 0 <= i <= len(parent.children):
            self.fail(f"index {i} out of range")
        if not rx.is_regex(self.r):
            self.fail("inserted tree is not a well-formed content model")
        for a in rx.nonterminals(self.r):
            _symbol_ok(self, g, a)
        return _set_rule(g, self.x, rt.insert(self.pos, self.r))

    def inverse(self):
        return DelTree(self.x, self.r, self.pos)

    def args(self):
        return [self.x, rx.arg_form(self.r), format_position(self.pos)]


@dataclass(frozen=True)
class DelTree(EditOp):
    x: str
    r: Tree
    pos: Position
    kind: ClassVar[str] = "del_tree"
    elementary: ClassVar[bool] = False

    def apply(self, g):
        rt = _rule_tree(self, g, self.x)
        u, i = _split(self, self.pos)
        node = _node(self, rt, self.pos)
        if node != self.r:
            self.fail(f"subtree at {format_position(self.pos)} is {rx.tree_to_regex(node)}, "
                      f"not {rx.tree_to_regex(self.r)}")
        parent = rt[u]
        if not u or parent.label not in (rx.CHOICE, rx.CONCAT):
            self.fail("parent is not a choice or concatenation")
        if len(parent.children) < 2:
            self.fail("parent would be left without children")
        return _set_rule(g, self.x, rt.delete(self.pos))

    def inverse(self):
        return InsTree(self.x, self.r, self.pos)

    def args(self):
        return [self.x, rx.arg_form(self.r), format_position(self.pos)]


@dataclass(frozen=True)
class InsTreeRule(EditOp):
    a: str
    term: str
    r: Tree
    start: bool = True
    kind: ClassVar[str] = "ins_treerule"
    elementary: ClassVar[bool] = False

    @property
    def target(self):
        return self.a

    def apply(self, g):
        if self.a in g.nonterminals:
            self.fail(f"{self.a} already exists")
        _check_name(self, self.a, "non-terminal")
        _check_name(self, self.term, "terminal")
        if not rx.is_regex(self.r):
            self.fail("body is not a well-formed content model")
        for b in rx.nonterminals(self.r):
            _symbol_ok(self, g, b, extra=(self.a,))
        rules = dict(g.rules)
        rules[self.a] = (self.term, self.r)
        return g.with_rules(rules, g.starts | {self.a} if self.start else g.starts)

    def inverse(self):
        return DelTreeRule(self.a, self.term, self.r, self.start)

    def args(self):
        return [self.a, self.term, rx.arg_form(self.r)] + ([] if self.start else ["nostart"])


@dataclass(frozen=True)
class DelTreeRule(EditOp):
    a: str
    term: str
    r: Tree
    start: bool = False
    kind: ClassVar[str] = "del_treerule"
    elementary: ClassVar[bool] = False

    @property
    def target(self):
        return self.a

    def apply(self, g):
        if self.a not in g.rules:
            self.fail(f"{self.a} has no production rule")
        t, body = g.rules[self.a]
        if t != self.term:
            self.fail(f"{self.a} produces {t}, not {self.term}")
        if body != self.r:
            self.fail(f"content model of {self.a} is {rx.tree_to_regex(body)}, "
                      f"not {rx.tree_to_regex(self.r)}")
        _check_start(self, g)
        users = _users(g, self.a)
        if users:
            raise DanglingReference(self.kind, self.a, users[0])
        rules = dict(g.rules)
        del rules[self.a]
        return g.with_rules(rules, g.starts - {self.a})

    def inverse(self):
        return InsTreeRule(self.a, self.term, self.r, self.start)

    def args(self):
        return [self.a, self.term, rx.arg_form(self.r)] + (["start"] if self.start else [])


def _sym(a: str) -> str:
    return rx.KEYWORD if a == rx.EPS else a


KINDS = {cls.kind: cls for cls in (SetStart, UnsetStart, InsElm, DelElm, RelRoot, RelElm,
                                   InsOpr, DelOpr, RelOpr, InsRule, DelRule, InsTree, DelTree,
                                   InsTreeRule, DelTreeRule)}


# -- public functions --------------------------------------------------------

def apply_edit(g: Grammar, ed: EditOp) -> Grammar:
    return ed.apply(g)


def invert_op(ed: EditOp) -> EditOp:
    return ed.inverse()


def is_simplification(ed: EditOp, g: Grammar) -> bool:
    """The registered language-preserving operations: flattening an operator
    into an identical parent, and collapsing a unary choice/concatenation."""
    if not isinstance(ed, DelOpr):
        return False
    rt = g.rule_tree(ed.x)
    node = rt[ed.pos]
    parent = rt[ed.pos[:-1]]
    if ed.pos[:-1] and parent.label == node.label:
        return True
    return node.label in (rx.CHOICE, rx.CONCAT) and len(node.children) == 1


def cost(ed: EditOp, g: Grammar) -> int:
    ed.apply(g)
    if is_simplification(ed, g):
        return 0
    return ELEMENTARY_COST if ed.elementary else NON_ELEMENTARY_COST


def _build(x: str, p: Position, r: Tree) -> List[EditOp]:
    """Elementary ops turning the ε leaf at ``p`` of rule ``x`` into ``r``."""
    if not r.children:
        return [] if r.label == rx.EPS else [RelElm(x, rx.EPS, r.label, p)]
    ops: List[EditOp] = [InsOpr(x, r.label, p, 1)]
    if r.label == rx.STAR:
        return ops + _build(x, p + (0,), r.children[0])
    for j, c in enumerate(r.children):
        if not c.children:
            ops.append(InsElm(x, c.label, p + (j,)))
        else:
            ops.append(InsElm(x, rx.EPS, p + (j,)))
            ops.extend(_build(x, p + (j,), c))
    ops.append(DelElm(x, rx.EPS, p + (len(r.children),)))
    return ops


def expand(ed: EditOp) -> List[EditOp]:
    """Equivalent sequence of elementary operations."""
    if ed.elementary:
        return [ed]
    if isinstance(ed, InsTree):
        if not ed.r.children:
            return [InsElm(ed.x, ed.r.label, ed.pos)]
        return [InsElm(ed.x, rx.EPS, ed.pos)] + _build(ed.x, ed.pos, ed.r)
    if isinstance(ed, InsTreeRule):
        return [InsRule(ed.a, ed.term, ed.start)] + _build(ed.a, (0,), ed.r)
    # deletions undo the matching insertion, last step first
    return [op.inverse() for op in reversed(expand(ed.inverse()))]


# -- text syntax -------------------------------------------------------------

def _split_args(text: str) -> List[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return out


def _parse_sym(s: str) -> str:
    return rx.EPS if s in (rx.KEYWORD, rx.EPS) else s


def parse_op(text: str) -> EditOp:
    """Parse ``kind(arg,...)``, e.g. ``rel_elm(H1,I2,I1,0.1.0)``."""
    text = text.strip()
    if "(" not in text or not text.endswith(")"):
        raise RegexSyntaxError(f"malformed operation {text!r}")
    kind, rest = text.split("(", 1)
    kind = kind.strip()
    if kind not in KINDS:
        raise RegexSyntaxError(f"unknown operation {kind!r}")
    args = _split_args(rest[:-1])
    cls = KINDS[kind]

    def flag(extra: List[str], default: bool) -> bool:
        if not extra:
            return default
        if len(extra) == 1 and extra[0] in ("start", "nostart"):
            return extra[0] == "start"
        raise RegexSyntaxError(f"bad trailing arguments {extra} in {text!r}")

    def want(n):
        if len(args) != n:
            raise RegexSyntaxError(f"{kind} takes {n} arguments, got {len(args)} in {text!r}")

    try:
        if cls in (SetStart, UnsetStart):
            want(1)
            return cls(args[0])
        if cls in (InsElm, DelElm):
            want(3)
            return cls(args[0], _parse_sym(args[1]), parse_position(args[2]))
        if cls is RelRoot:
            want(3)
            return cls(*args)
        if cls is RelElm:
            want(4)
            return cls(args[0], _parse_sym(args[1]), _parse_sym(args[2]), parse_position(args[3]))
        if cls in (InsOpr, DelOpr):
            want(4)
            return cls(args[0], args[1], parse_position(args[2]), int(args[3]))
        if cls is RelOpr:
            want(4)
            return cls(args[0], args[1], args[2], parse_position(args[3]))
        if cls in (InsRule, DelRule):
            if len(args) < 2:
                want(2)
            return cls(args[0], args[1], flag(args[2:], cls is InsRule))
        if cls in (InsTree, DelTree):
            want(3)
            return cls(args[0], rx.regex_to_tree(args[1]), parse_position(args[2]))
        if len(args) < 3:
            want(3)
        return cls(args[0], args[1], rx.regex_to_tree(args[2]), flag(args[3:], cls is InsTreeRule))
    except ValueError as exc:
        raise RegexSyntaxError(f"{exc} in {text!r}") from None


def format_op(ed: EditOp) -> str:
    return str(ed)
