"""Command-line interface.

Exit codes:

* ``check``: 0 equivalent, 1 inequivalent, 2 invalid input.
* ``validate``: 0 valid, 1 violations found, 2 unreadable or unparsable input.
* ``canon`` / ``catalog``: 0 on success, 2 on bad input.
* ``framed check``: 0 equivalent, 1 inequivalent, 2 invalid input,
  3 if the ``--oracle`` cross-check disagrees with the verdict.

Any flow argument may be a path, ``-`` for standard input, or
``catalog:<key>`` for a built-in presentation.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .catalog import catalog_keys, from_key
from .equivalence import explain_inequivalence, find_equivalence
from .errors import MS3Error, ValidationError
from .framed import classify, framing_invariants, framings_equivalent, is_infinite, oracle_equivalent
from .model import validate_presentation
from .textformat import parse_flow, parse_framing, parse_msgraph, serialize

EXIT_OK, EXIT_DIFFERENT, EXIT_INVALID, EXIT_DISAGREE = 0, 1, 2, 3
ORACLE_ENV = "MS3_ORACLE_BOUND"


class _InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _InputError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError as exc:
        raise _InputError(f"{path}: not UTF-8 ({exc.reason})") from None


def _load(arg: str, validate: bool = True):
    if arg.startswith("catalog:"):
        try:
            return from_key(arg[len("catalog:"):])
        except KeyError as exc:
            raise _InputError(exc.args[0]) from None
    return parse_flow(_read(arg), validate=validate, source=arg)


def _report(exc: Exception) -> None:
    if isinstance(exc, ValidationError):
        print("error: invalid presentation", file=sys.stderr)
        for v in exc.report:
            print(f"  {v}", file=sys.stderr)
    else:
        print(f"error: {exc}", file=sys.stderr)


def cmd_check(args) -> int:
    p1, p2 = _load(args.a), _load(args.b)
    iso = find_equivalence(p1, p2)
    if iso is not None:
        print("equivalent")
        for line in iso.lines():
            print(line)
        return EXIT_OK
    print("inequivalent")
    print(explain_inequivalence(p1, p2))
    return EXIT_DIFFERENT


def cmd_validate(args) -> int:
    p = _load(args.file, validate=False)
    report = validate_presentation(p)
    if not report:
        print("valid")
        return EXIT_OK
    for v in report:
        print(v)
    return EXIT_DIFFERENT


def cmd_canon(args) -> int:
    sys.stdout.write(serialize(_load(args.file)))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        for k in catalog_keys(args.max_twist):
            print(k)
        return EXIT_OK
    if not args.key:
        raise _InputError("catalog emit needs a key")
    try:
        p = from_key(args.key)
    except KeyError as exc:
        raise _InputError(exc.args[0]) from None
    sys.stdout.write(serialize(p))
    return EXIT_OK


def _default_bound(*framings) -> int:
    env = os.environ.get(ORACLE_ENV)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise _InputError(f"{ORACLE_ENV} must be a positive integer, got {env!r}") from None
        if value < 1:
            raise _InputError(f"{ORACLE_ENV} must be a positive integer, got {env!r}")
        return value
    top = max((abs(v) for f in framings for v in f.values() if not is_infinite(v)), default=0)
    return 4 * max(top, 1)


def _fmt_invariant(inv) -> str:
    kind, value = inv
    if kind == "inf":
        return "infinite on " + ",".join(sorted(value))
    return str(value)


def cmd_framed(args) -> int:
    g = parse_msgraph(_read(args.graph), source=args.graph)
    f1 = parse_framing(_read(args.f1), source=args.f1)
    f2 = parse_framing(_read(args.f2), source=args.f2)
    inv1, inv2 = framing_invariants(g, f1), framing_invariants(g, f2)
    verdict = framings_equivalent(g, f1, f2)
    print("equivalent" if verdict else "inequivalent")
    for comp, a, b in zip(classify(g), inv1, inv2):
        mark = "=" if a == b else "!="
        print(
            f"component {','.join(sorted(comp.edges)) or ','.join(sorted(comp.vertices))}: "
            f"type {int(comp.type)}: {_fmt_invariant(a)} {mark} {_fmt_invariant(b)}"
        )
    if args.oracle is not False:
        bound = args.oracle if args.oracle is not None else _default_bound(f1, f2)
        agree = oracle_equivalent(g, f1, f2, bound) == verdict
        print(f"oracle bound={bound}: {'agrees' if agree else 'DISAGREES'}")
        if not agree:
            return EXIT_DISAGREE
    return EXIT_OK if verdict else EXIT_DIFFERENT


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("bound must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ms3", description="Equivalence of Morse-Smale flow presentations.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide equivalence of two presentations")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("validate", help="report structural violations")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("canon", help="print the deterministic serialization")
    p.add_argument("file")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("catalog", help="list or emit built-in presentations")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("key", nargs="?")
    p.add_argument("--max-twist", type=int, default=5, help="largest n listed for the twisted family")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("framed", help="framed-graph tools")
    fsub = p.add_subparsers(dest="framed_command", required=True)
    q = fsub.add_parser("check", help="decide equivalence of two framings")
    q.add_argument("graph")
    q.add_argument("f1")
    q.add_argument("f2")
    q.add_argument(
        "--oracle", nargs="?", type=_positive, const=None, default=False, metavar="BOUND",
        help=f"cross-check with breadth-first search (default bound: ${ORACLE_ENV} or 4x the largest |value|)",
    )
    q.set_defaults(func=cmd_framed)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (_InputError, MS3Error) as exc:
        _report(exc)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
