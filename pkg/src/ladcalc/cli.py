"""Command-line front end.

Exit codes: 0 success, 1 oracle inconsistency, 2 validation failure,
3 parse error, 4 capability refusal.
"""

from __future__ import annotations

import argparse
import sys

from . import corpus, dtree, lad, scopo
from .discrete import decide
from .dtree import UnbuildableRadius
from .ugroup import oracle_consistency

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_INVALID = 2
EXIT_PARSE = 3
EXIT_REFUSED = 4


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code
        self.message = message


def _read(path: str) -> str:
    if path.startswith("corpus:"):
        return corpus.get(path[len("corpus:"):]).source
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, check: bool = True) -> lad.Diagram:
    try:
        d = lad.load(_read(path))
    except lad.LadParseError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc}") from None
    if check:
        problems = lad.validate(d)
        if problems:
            raise _Exit(EXIT_INVALID, "\n".join(f"{path}: {p}" for p in problems))
    return d


def cmd_validate(args) -> int:
    d = _load(args.path, check=False)
    problems = lad.validate(d)
    if problems:
        for p in problems:
            print(f"violation={p}")
        return EXIT_INVALID
    print("valid=yes")
    return EXIT_OK


def cmd_classify(args) -> int:
    print(scopo.classify(_load(args.path)).record())
    return EXIT_OK


def cmd_discrete(args) -> int:
    print(decide(_load(args.path)).record())
    return EXIT_OK


def cmd_tree(args) -> int:
    d = _load(args.path)
    base = args.base or d.vertices[0]
    try:
        t = dtree.build(d, base, args.radius)
    except UnbuildableRadius as exc:
        raise _Exit(EXIT_REFUSED, f"UnbuildableRadius: {exc}") from None
    except dtree.UnknownVertex:
        raise _Exit(EXIT_PARSE, f"unknown base vertex {base}") from None
    text = dtree.to_dot(t)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"vertices={len(t)} dot={args.dot}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    d = _load(args.path)
    try:
        report = oracle_consistency(d, r=args.fix_radius, R=args.ball_radius)
    except UnbuildableRadius as exc:
        raise _Exit(EXIT_REFUSED, f"UnbuildableRadius: {exc}") from None
    print(report.text())
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


def cmd_scopos(args) -> int:
    d = _load(args.path)
    if not d.is_finite:
        raise _Exit(EXIT_REFUSED, "scopo enumeration needs a diagram without rays")
    try:
        found = list(scopo.scopos(d, max_edges=args.cap))
    except scopo.TooManyEdges as exc:
        raise _Exit(EXIT_REFUSED, str(exc)) from None
    for O in found:
        res = scopo.attractor(d, O)
        arcs = ",".join(a for a in d.graph.arcs if a in O) or "-"
        print(f"scopo={arcs} type={res.scopo_type} {res.describe()}")
    print(f"count={len(found)}")
    return EXIT_OK


def cmd_examples(args) -> int:
    if args.action == "list":
        for e in corpus.ENTRIES:
            disc = "yes" if e.expected_discrete else "no"
            print(f"name={e.name} type={e.expected_type} discrete={disc}")
        return EXIT_OK
    if not args.name:
        raise _Exit(EXIT_PARSE, "examples emit needs a name")
    try:
        sys.stdout.write(corpus.get(args.name).source)
    except KeyError:
        raise _Exit(EXIT_PARSE, f"no corpus entry named {args.name}") from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lad", description="Local action diagrams for groups acting on trees."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    path_help = "a .lad file, or corpus:<name> for a builtin example"

    p = sub.add_parser("validate", help="check the diagram axioms")
    p.add_argument("path", help=path_help)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="print the action type with its witness")
    p.add_argument("path", help=path_help)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("discrete", help="decide whether the universal group is discrete")
    p.add_argument("path", help=path_help)
    p.set_defaults(func=cmd_discrete)

    p = sub.add_parser("tree", help="emit the truncated Δ-tree as DOT")
    p.add_argument("path", help=path_help)
    p.add_argument("--base", help="base vertex (default: first declared vertex)")
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--dot", metavar="FILE", help="write DOT to FILE instead of standard output")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("oracle", help="cross-check discreteness with the stabiliser search")
    p.add_argument("path", help=path_help)
    p.add_argument("--fix-radius", type=int, default=2)
    p.add_argument("--ball-radius", type=int, default=4)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("scopos", help="list every scopo with its attractor")
    p.add_argument("path", help=path_help)
    p.add_argument("--cap", type=int, default=scopo.MAX_SCOPO_EDGES, help="maximum number of edges")
    p.set_defaults(func=cmd_scopos)

    p = sub.add_parser("examples", help="list or print the builtin corpus")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "oracle" and args.ball_radius < args.fix_radius + 2:
        parser.error("--ball-radius must be at least --fix-radius + 2")
    if args.command == "tree" and args.radius < 0:
        parser.error("--radius must be non-negative")
    try:
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
