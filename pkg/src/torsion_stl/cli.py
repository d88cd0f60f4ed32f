"""Command-line front end.

Exit codes: 0 exact value, 2 bounds only, 1 error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from .certify import StlOptions, choose_collection, compute_stl
from .constructions import builtin_certificate
from .enumeration import EnumerationCapError
from .groups import GroupTableError, parse_group_spec
from .lp import build_polyhedron, export_lp_text
from .pieces import CollectionCapError
from .selftest import run_selftest
from .words import FreeProduct, FreeProductWord, WordSyntaxError, parse_word

EXIT_EXACT, EXIT_ERROR, EXIT_BOUNDS = 0, 1, 2


class UsageError(ValueError):
    pass


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, target)


def _groups(args: argparse.Namespace) -> FreeProduct:
    if not args.group_a or not args.group_b:
        raise UsageError("--group-a and --group-b are required")
    return FreeProduct(parse_group_spec(args.group_a, "a"), parse_group_spec(args.group_b, "b"))


def _options(args: argparse.Namespace) -> StlOptions:
    choice = args.collection
    data = None
    if choice not in ("auto", "builtin", "generic"):
        data = json.loads(Path(choice).read_text())
        choice = "file"
    if args.max_pieces is not None and args.max_pieces < 1:
        raise UsageError("--max-pieces must be positive")
    if args.max_turns is not None and args.max_turns < 1:
        raise UsageError("--max-turns must be positive")
    opts = StlOptions(collection=choice, collection_data=data, max_turns=args.max_turns,
                      override_caps=args.override_caps)
    if args.max_pieces is not None:
        opts.max_pieces = args.max_pieces
    return opts


def _fmt(q) -> str:
    return f"{q.numerator}/{q.denominator}  ({float(q):.6f})"


def cmd_compute(args: argparse.Namespace) -> int:
    G = _groups(args)
    raw = parse_word(args.word, G)
    report = compute_stl(raw, G, _options(args), text=args.word)
    if args.out:
        _write(args.out, report.dumps())
    if report.exact:
        print(_fmt(report.lower_bound))
        return EXIT_EXACT
    print(f"lower {_fmt(report.lower_bound)}")
    print("upper " + (_fmt(report.upper_bound) if report.upper_bound is not None else "none"))
    return EXIT_BOUNDS


def _core_word(args: argparse.Namespace) -> FreeProductWord:
    G = _groups(args)
    raw = parse_word(args.word, G)
    _, core = G.cyclically_reduce(raw)
    if not isinstance(core, FreeProductWord):
        raise UsageError("word is conjugate into a factor; there is nothing to export")
    return core


def cmd_export(args: argparse.Namespace) -> int:
    word = _core_word(args)
    fmt = args.format
    if fmt == "lp-text":
        text = export_lp_text(build_polyhedron(choose_collection(word, _options(args))))
    elif fmt == "json":
        text = choose_collection(word, _options(args)).dumps()
    elif fmt == "dot":
        cert = builtin_certificate(word)
        if cert is None:
            report = compute_stl(word.syllables, word.groups, _options(args))
            cert = report.certificate
        if cert is None:
            raise UsageError("no certificate surface found for this word")
        text = cert.to_dot()
    else:
        raise UsageError(f"unknown export format {fmt!r}")
    _write(args.out, text)
    return EXIT_EXACT


def cmd_selftest(args: argparse.Namespace) -> int:
    return run_selftest(quick=args.quick, seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torsion-stl",
        description="Exact stable torsion length in free products of two finite groups.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log pipeline details")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--group-a", help="cyclic:N, S3, a group JSON file or inline JSON")
        p.add_argument("--group-b", help="same forms as --group-a")
        p.add_argument("--word", required=True, help='e.g. "a b a^-1 b^-1" or "A:1 B:3"')
        p.add_argument("--collection", default="auto",
                       help="auto, builtin, generic, or a path to a collection JSON file")
        p.add_argument("--max-turns", type=int, help="turn bound for the generic collection")
        p.add_argument("--max-pieces", type=int, help="piece cap for exhaustive enumeration")
        p.add_argument("--override-caps", action="store_true",
                       help="enumerate generic collections beyond the default size cap")
        p.add_argument("--out", help="output file (written atomically)")
        p.add_argument("--seed", type=int, default=0,
                       help="accepted for uniform configs; compute and export are deterministic")

    pc = sub.add_parser("compute", help="bounds and, when they meet, the exact value")
    common(pc)
    pc.add_argument("--format", choices=["json"], default="json", help="report format for --out")
    pc.set_defaults(func=cmd_compute)

    pe = sub.add_parser("export", help="LP text, collection JSON or certificate DOT")
    common(pe)
    pe.add_argument("--format", choices=["lp-text", "json", "dot"], default="lp-text")
    pe.set_defaults(func=cmd_export)

    ps = sub.add_parser("selftest", help="formula-versus-computed table")
    ps.add_argument("--quick", action="store_true", help="only p, q <= 3")
    ps.add_argument("--seed", type=int, default=0)
    ps.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_EXACT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except WordSyntaxError as exc:
        print(f"error: cannot parse word: {exc}", file=sys.stderr)
    except (CollectionCapError, EnumerationCapError, GroupTableError, UsageError,
            ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
