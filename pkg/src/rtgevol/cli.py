"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 parse error, 3 validation failure
(including undefined operations and schema mismatches), 4 no solution.
"""
from __future__ import annotations

import argparse
import os
import sys
import xml.etree.ElementTree as ET
from typing import List, Optional

from . import regex as rx
from .corrector import correct
from .derivation import format_witness, validate
from .errors import InvalidDocument, NoSolution, RegexSyntaxError, RTGError, SchemaMismatch
from .formats import import_dtd, parse_grammar, parse_xml, serialize_grammar, serialize_xml
from .grammar import check_reduced, union_grammars
from .mapping import (MappingFile, SchemaMapping, apply_script, first_difference,
                      invert_script, mapping_gen, parse_mapping, serialize_mapping)
from .trees import format_position, from_term, parse_position, to_term
from .xtram import translate

EXIT_USAGE, EXIT_PARSE, EXIT_INVALID, EXIT_NO_SOLUTION = 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: Optional[str], text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def load_grammar(path: str):
    text = _read(path)
    g = import_dtd(text) if path.endswith(".dtd") else parse_grammar(text)
    return check_reduced(g)


def load_doc(path: str):
    text = _read(path)
    if text.lstrip().startswith("<"):
        try:
            return parse_xml(text)
        except ET.ParseError as exc:
            raise RegexSyntaxError(f"{path}: {exc}") from None
    try:
        return from_term(text.strip())
    except ValueError as exc:
        raise RegexSyntaxError(f"{path}: {exc}") from None


def load_mapping(path: str) -> MappingFile:
    mf = parse_mapping(_read(path))
    base = os.path.dirname(path)
    if mf.source:
        mf.source = os.path.join(base, mf.source)
    if mf.target:
        mf.target = os.path.join(base, mf.target)
    return mf


def _rel(path: Optional[str], out: Optional[str]) -> Optional[str]:
    if path is None:
        return None
    return os.path.relpath(path, os.path.dirname(os.path.abspath(out))) if out else path


# -- commands ----------------------------------------------------------------

def cmd_union(args):
    g = union_grammars([load_grammar(p) for p in args.grammars])
    _write(args.output, serialize_grammar(g))


def cmd_genmap(args):
    g = load_grammar(args.grammar)
    m = mapping_gen(g)
    if args.target:
        _write(args.target, serialize_grammar(m.target))
    _write(args.output, serialize_mapping(m.script, _rel(args.grammar, args.output),
                                          _rel(args.target, args.output)))
    print(f"{len(m.script)} operations, cost {m.cost()}", file=sys.stderr)


def cmd_apply(args):
    g = load_grammar(args.grammar)
    mf = load_mapping(args.mapping)
    _write(args.output, serialize_grammar(apply_script(g, mf.script)))


def cmd_invert(args):
    mf = load_mapping(args.mapping)
    _write(args.output, serialize_mapping(invert_script(mf.script), _rel(mf.target, args.output),
                                          _rel(mf.source, args.output)))


def cmd_compose(args):
    m1, m2 = load_mapping(args.first), load_mapping(args.second)
    if m1.target and m2.source:
        a, b = load_grammar(m1.target), load_grammar(m2.source)
        if a != b:
            raise SchemaMismatch("cannot compose: " + first_difference(a, b))
    _write(args.output, serialize_mapping(m1.script + m2.script, _rel(m1.source, args.output),
                                          _rel(m2.target, args.output)))


def cmd_validate(args):
    t, g = load_doc(args.document), load_grammar(args.grammar)
    w = validate(t, g)
    if w is None:
        print("invalid", file=sys.stderr)
        return EXIT_INVALID
    if args.witness:
        print("\n".join(format_witness(t, w)))
    return 0


def _print_limited(items, args):
    if args.best:
        items = items[:1]
    elif args.max is not None:
        items = items[:args.max]
    for it in items:
        print(it)


def cmd_correct(args):
    t, g = load_doc(args.document), load_grammar(args.grammar)
    p = parse_position(args.at)
    if not t.has(p):
        raise InvalidDocument(f"no node at {args.at}")
    if args.model is not None:
        target = rx.regex_to_tree(args.model)
    else:
        target = args.nt
    res = correct(t[p], target, g, args.th, max_results=None)
    if not res:
        print(f"no correction within threshold {args.th}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    _print_limited(res, args)
    return 0


def _interactive_choice(ed, pos, cands) -> int:
    err = sys.stderr
    print(f"{ed} at {format_position(pos)}: {len(cands)} candidates", file=err)
    for i, (tree, c) in enumerate(cands, start=1):
        print(f"  [{i}] cost {c}: {to_term(tree)}", file=err)
    while True:
        err.write("choose> ")
        err.flush()
        line = sys.stdin.readline()
        if not line:
            return 0
        try:
            k = int(line.strip())
        except ValueError:
            continue
        if 1 <= k <= len(cands):
            return k - 1


def cmd_translate(args):
    t = load_doc(args.document)
    mf = load_mapping(args.mapping)
    src_path = args.source or mf.source
    if not src_path:
        raise InvalidDocument("mapping has no source grammar; pass --source")
    g = load_grammar(src_path)
    m = SchemaMapping(g, apply_script(g, mf.script), mf.script)
    choose = _interactive_choice if args.interactive else None
    results = translate(t, m, args.th, choose=choose)
    if args.interactive:
        trace = args.output + ".trace" if args.output else os.path.splitext(args.document)[0] + ".trace"
        lines = []
        for step in results[0].trace:
            lines.append(step.op)
            lines.extend(f"  {c}" for c in step.changes)
        _write(trace, "\n".join(lines) + "\n")
    if args.best or args.interactive:
        _write(args.output, serialize_xml(results[0].result))
    else:
        _write(args.output, "".join(f"{r.total_cost}\t{to_term(r.result)}\n" for r in results))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rtgevol", description="Schema evolution for regular tree grammars.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("union", help="union of grammars")
    p.add_argument("grammars", nargs="+")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_union)

    p = sub.add_parser("genmap", help="mapping from an RTG to its least LTG extension")
    p.add_argument("grammar")
    p.add_argument("-o", "--output")
    p.add_argument("--target")
    p.set_defaults(func=cmd_genmap)

    p = sub.add_parser("apply", help="apply a mapping script to a grammar")
    p.add_argument("grammar")
    p.add_argument("mapping")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("invert", help="invert a mapping")
    p.add_argument("mapping")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("compose", help="compose two mappings")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("validate", help="check a document against a grammar")
    p.add_argument("document")
    p.add_argument("grammar")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("correct", help="corrections of a subtree within a threshold")
    p.add_argument("document")
    p.add_argument("grammar")
    p.add_argument("--at", default="e")
    target = p.add_mutually_exclusive_group()
    target.add_argument("--model")
    target.add_argument("--nt")
    p.add_argument("--th", type=int, required=True)
    _add_select(p, allow_max=True)
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("translate", help="translate a document along a mapping")
    p.add_argument("document")
    p.add_argument("mapping")
    p.add_argument("--th", type=int, required=True)
    p.add_argument("--source", help="source grammar (overrides the mapping header)")
    p.add_argument("-o", "--output")
    _add_select(p, allow_max=False)
    p.set_defaults(func=cmd_translate)
    return ap


def _add_select(p, allow_max: bool):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true")
    g.add_argument("--best", action="store_true")
    if allow_max:
        g.add_argument("--max", type=int)
    else:
        g.add_argument("--interactive", action="store_true")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "th", 0) is not None and getattr(args, "th", 0) < 0:
        print("threshold must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args) or 0
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RegexSyntaxError, ValueError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NoSolution as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except RTGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
