"""Text formats: native grammar files, a DTD subset, and element-only XML.

Grammar file::

    start: H1
    H1 -> hospital [I1*]
    I1 -> info [P|T]      # comment

Rules sharing a left-hand side are merged into a choice.
"""
from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from typing import Dict, List, Set, Tuple

from . import regex as rx
from .errors import RegexSyntaxError, UnsupportedFeature
from .grammar import Grammar, normalize
from .trees import Tree

_RULE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*->\s*([A-Za-z_][A-Za-z0-9_.\-]*)\s*\[(.*)\]\s*$")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_grammar(text: str) -> Grammar:
    starts: List[str] = []
    rules: List[Tuple[str, str, Tree]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if line.lstrip().startswith("start:"):
            for name in line.split(":", 1)[1].replace(",", " ").split():
                if not rx.is_name(name):
                    raise RegexSyntaxError(f"bad start symbol {name!r}", offset=line.find(name) + 1,
                                           text=raw, line=lineno)
                starts.append(name)
            continue
        m = _RULE.match(line)
        if not m:
            raise RegexSyntaxError("expected 'X -> label [regex]'", offset=1, text=raw, line=lineno)
        try:
            body = rx.regex_to_tree(m.group(3))
        except RegexSyntaxError as exc:
            col = m.start(3) + (exc.offset or 0) + 1
            raise RegexSyntaxError(exc.message, offset=col, text=raw, line=lineno) from None
        rules.append((m.group(1), m.group(2), body))
    return normalize(rules, starts)


def serialize_grammar(g: Grammar) -> str:
    lines = ["start: " + " ".join(sorted(g.starts)) if g.starts else "start:"]
    for x, (a, body) in g.rules.items():
        lines.append(f"{x} -> {a} [{rx.tree_to_regex(body)}]")
    return "\n".join(lines) + "\n"


# -- DTD subset --------------------------------------------------------------

_DECL = re.compile(r"<!\s*([A-Z]+)\s+(.*?)>", re.S)
_MODEL_TOKEN = re.compile(r"\s*(#PCDATA|[A-Za-z_][\w.\-]*|[(),|*+?])")


def _nt_name(element: str) -> str:
    base = element[0].upper() + element[1:]
    return re.sub(r"[^A-Za-z0-9_]", "_", base)


def _parse_model(text: str, element: str) -> Tuple[Tree, List[str]]:
    toks, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _MODEL_TOKEN.match(text, pos)
        if not m:
            raise RegexSyntaxError(f"bad content model for {element}: {text!r}", offset=pos)
        toks.append(m.group(1))
        pos = m.end()
    if any(t in ("+", "?") for t in toks):
        raise UnsupportedFeature(f"'+' and '?' are not supported (element {element})")
    if "#PCDATA" in toks:
        if toks in (["(", "#PCDATA", ")"], ["(", "#PCDATA", ")", "*"]):
            return rx.eps(), []
        raise UnsupportedFeature(f"mixed content is not supported (element {element})")
    names: List[str] = []
    i = 0

    def seq(sep: str, item):
        nonlocal i
        parts = [item()]
        while i < len(toks) and toks[i] == sep:
            i += 1
            parts.append(item())
        return parts

    def alt():
        parts = seq("|", cat)
        return parts[0] if len(parts) == 1 else rx.Tree(rx.CHOICE, tuple(parts))

    def cat():
        parts = seq(",", post)
        return parts[0] if len(parts) == 1 else rx.Tree(rx.CONCAT, tuple(parts))

    def post():
        nonlocal i
        node = atom()
        while i < len(toks) and toks[i] == "*":
            i += 1
            node = rx.star(node)
        return node

    def atom():
        nonlocal i
        if i >= len(toks):
            raise RegexSyntaxError(f"unexpected end of content model for {element}")
        tok = toks[i]
        i += 1
        if tok == "(":
            node = alt()
            if i >= len(toks) or toks[i] != ")":
                raise RegexSyntaxError(f"missing ')' in content model for {element}")
            i += 1
            return node
        if tok in ("(", ")", ",", "|", "*"):
            raise RegexSyntaxError(f"unexpected {tok!r} in content model for {element}")
        names.append(tok)
        return rx.Tree(tok)

    node = alt()
    if i != len(toks):
        raise RegexSyntaxError(f"trailing {toks[i]!r} in content model for {element}")
    return node, names


def import_dtd(text: str) -> Grammar:
    """Local tree grammar with one non-terminal per element name.

    Elements used but never declared are text-only leaves.  Elements declared
    but never used inside another model are the start symbols.
    """
    models: Dict[str, Tree] = {}
    order: List[str] = []
    used: List[str] = []
    for m in _DECL.finditer(re.sub(r"<!--.*?-->", "", text, flags=re.S)):
        kind, body = m.group(1), m.group(2).strip()
        if kind != "ELEMENT":
            raise UnsupportedFeature(f"<!{kind}> declarations are not supported")
        parts = body.split(None, 1)
        if len(parts) != 2:
            raise RegexSyntaxError(f"malformed declaration {m.group(0)!r}")
        name, model = parts
        if name in models:
            raise RegexSyntaxError(f"element {name} declared twice")
        if model.strip() == "EMPTY":
            r, names = rx.eps(), []
        elif model.strip() == "ANY":
            raise UnsupportedFeature("ANY content is not supported")
        else:
            r, names = _parse_model(model, name)
        models[name] = r
        order.append(name)
        used.extend(names)
    if not models:
        raise RegexSyntaxError("no element declarations found")
    elements = order + [n for n in dict.fromkeys(used) if n not in models]
    nts: Dict[str, str] = {}
    taken: Set[str] = set()
    for e in elements:
        base = cand = _nt_name(e)
        k = 2
        while cand in taken or cand == rx.KEYWORD:
            cand = f"{base}_{k}"
            k += 1
        taken.add(cand)
        nts[e] = cand
    rules = []
    for e in elements:
        body = models.get(e, rx.eps())
        rules.append((nts[e], e, _rename_elements(body, nts)))
    roots = [e for e in order if e not in set(used)] or order[:1]
    return normalize(rules, [nts[e] for e in roots])


def _rename_elements(r: Tree, nts: Dict[str, str]) -> Tree:
    if not r.children:
        return r if r.label == rx.EPS else Tree(nts[r.label])
    return Tree(r.label, tuple(_rename_elements(c, nts) for c in r.children))


# -- XML ---------------------------------------------------------------------

def parse_xml(text: str) -> Tree:
    """Element structure of an XML document; attributes and text are dropped."""
    root = ET.fromstring(text)

    def conv(e) -> Tree:
        return Tree(e.tag, tuple(conv(c) for c in e))

    return conv(root)


def serialize_xml(t: Tree) -> str:
    lines: List[str] = []

    def emit(n: Tree, depth: int):
        pad = "  " * depth
        if not n.children:
            lines.append(f"{pad}<{n.label}/>")
            return
        lines.append(f"{pad}<{n.label}>")
        for c in n.children:
            emit(c, depth + 1)
        lines.append(f"{pad}</{n.label}>")

    emit(t, 0)
    return "\n".join(lines) + "\n"
