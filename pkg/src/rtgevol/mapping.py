"""Edit scripts, schema mappings and the RTG-to-LTG mapping generator."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from . import regex as rx
from .editops import (DelTreeRule, EditOp, InsOpr, InsTree, RelElm, SetStart, cost,
                      format_op, parse_op)
from .errors import NotDefined, NotDefinedAt, RegexSyntaxError, SchemaMismatch
from .grammar import Grammar, check_reduced, competing_pairs, is_ltg

EditScript = Tuple[EditOp, ...]


def _fold(g: Grammar, m: Sequence[EditOp]):
    for k, ed in enumerate(m):
        try:
            after = ed.apply(g)
        except NotDefined as exc:
            raise NotDefinedAt(k, format_op(ed), exc) from exc
        yield k, ed, g, after
        g = after


def apply_script(g: Grammar, m: Sequence[EditOp], strict: bool = True) -> Grammar:
    """Apply ``m`` op by op.  Only the final grammar must be reduced (``strict``)."""
    for _, _, _, g in _fold(g, m):
        pass
    if strict:
        check_reduced(g)
    return g


def intermediates(g: Grammar, m: Sequence[EditOp]) -> List[Grammar]:
    """``[G0, G1, ..., Gn]``."""
    out = [g]
    for _, _, _, after in _fold(g, m):
        out.append(after)
    return out


def script_cost(m: Sequence[EditOp], g: Grammar) -> int:
    return sum(cost(ed, before) for _, ed, before, _ in _fold(g, m))


@dataclass(frozen=True, eq=False)
class SchemaMapping:
    source: Grammar
    target: Grammar
    script: EditScript

    def __post_init__(self):
        object.__setattr__(self, "script", tuple(self.script))

    def __eq__(self, other):
        if not isinstance(other, SchemaMapping):
            return NotImplemented
        return (self.source, self.target, self.script) == (other.source, other.target, other.script)

    __hash__ = None

    def __len__(self):
        return len(self.script)

    def cost(self) -> int:
        return script_cost(self.script, self.source)

    def check(self) -> "SchemaMapping":
        got = apply_script(self.source, self.script, strict=False)
        if got != self.target:
            raise SchemaMismatch("script does not transform the source into the target: "
                                 + first_difference(got, self.target))
        return self


def make_mapping(source: Grammar, script: Iterable[EditOp], strict: bool = True) -> SchemaMapping:
    script = tuple(script)
    return SchemaMapping(source, apply_script(source, script, strict), script)


def identity(g: Grammar) -> SchemaMapping:
    return SchemaMapping(g, g, ())


def first_difference(g1: Grammar, g2: Grammar) -> str:
    if g1.starts != g2.starts:
        return f"start symbols {sorted(g1.starts)} vs {sorted(g2.starts)}"
    for x in sorted(set(g1.rules) | set(g2.rules)):
        if x not in g1.rules:
            return f"{x} only on the right"
        if x not in g2.rules:
            return f"{x} only on the left"
        if g1.rules[x] != g2.rules[x]:
            (a, r), (b, s) = g1.rules[x], g2.rules[x]
            return f"rule {x}: {a}[{rx.tree_to_regex(r)}] vs {b}[{rx.tree_to_regex(s)}]"
    return "no difference"


def compose(m1: SchemaMapping, m2: SchemaMapping) -> SchemaMapping:
    if m1.target != m2.source:
        raise SchemaMismatch("cannot compose: " + first_difference(m1.target, m2.source))
    return SchemaMapping(m1.source, m2.target, m1.script + m2.script)


def invert_script(m: Sequence[EditOp]) -> EditScript:
    return tuple(ed.inverse() for ed in reversed(m))


def invert(m: SchemaMapping) -> SchemaMapping:
    return SchemaMapping(m.target, m.source, invert_script(m.script))


# -- mapping generation ------------------------------------------------------

def mapping_gen(g: Grammar) -> SchemaMapping:
    """Edit script turning ``g`` into the least LTG containing it.

    For each terminal with competing non-terminals, the lexicographically
    smallest one absorbs the others: their content models are added as
    alternatives, their occurrences renamed, and their rules dropped.
    """
    check_reduced(g)
    script: List[EditOp] = []
    cur = g

    def emit(ed: EditOp):
        nonlocal cur
        cur = ed.apply(cur)
        script.append(ed)

    for a, group in competing_pairs(g).items():
        x0, rest = group[0], group[1:]
        emit(InsOpr(x0, rx.CHOICE, (0,), 1))
        for i, xi in enumerate(rest, start=1):
            emit(InsTree(x0, cur.reg(xi), (0, i)))
            for y in sorted(cur.rules):
                for u in rx.occurrences(cur.reg(y), xi):
                    emit(RelElm(y, xi, x0, (0,) + u))
            if x0 not in cur.starts and xi in cur.starts:
                emit(SetStart(x0))
            emit(DelTreeRule(xi, a, cur.reg(xi), xi in cur.starts))
    if not is_ltg(cur):
        raise AssertionError("merge left competing non-terminals")
    return SchemaMapping(g, cur, tuple(script))


# -- text format -------------------------------------------------------------

@dataclass
class MappingFile:
    script: EditScript
    source: Optional[str] = None
    target: Optional[str] = None


def parse_mapping(text: str) -> MappingFile:
    ops, headers = [], {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key = line.split(":", 1)[0].strip()
        if ":" in line and key in ("source", "target") and not ops:
            headers[key] = line.split(":", 1)[1].strip() or None
            continue
        try:
            ops.append(parse_op(line))
        except RegexSyntaxError as exc:
            raise RegexSyntaxError(exc.message, offset=exc.offset, text=raw, line=lineno) from None
    return MappingFile(tuple(ops), headers.get("source"), headers.get("target"))


def serialize_mapping(script: Sequence[EditOp], source: Optional[str] = None,
                      target: Optional[str] = None) -> str:
    lines = []
    if source:
        lines.append(f"source: {source}")
    if target:
        lines.append(f"target: {target}")
    lines.extend(format_op(ed) for ed in script)
    return "\n".join(lines) + "\n"
