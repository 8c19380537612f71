"""Command-line front end: ``actfort <subcommand> <ecosystem.json> [flags]``.

Exit codes: 0 success, 1 usage error, 2 input or schema error, 3 no attack
chain reaches the target (``chain`` only).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence, TextIO

from .ecosystem import Ecosystem, load_ecosystem_file, validate
from .errors import ActFortError, NoChainFound
from .reporting import StatsReport, compute_stats, dumps_report, export_dot, export_json
from .reporting import SCHEMA_VERSION, _closure_doc, _stats_doc
from .strategy import attack_chain, harden, victim_closure
from .tdg import build_tdg

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NO_CHAIN = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        raise _UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _group_size(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"group size must be at least 2, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("file", help="ecosystem JSON document")
    common.add_argument(
        "--no-sms",
        action="store_true",
        help="drop phone-number and sms-code from the attacker's capabilities",
    )

    parser = _Parser(prog="actfort", description="Account-takeover dependency analysis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common], help="print configuration warnings")

    p = sub.add_parser("graph", parents=[common], help="export the dependency graph")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--max-group-size", type=_group_size, default=2)

    p = sub.add_parser("closure", parents=[common], help="accounts falling from a seed set")
    p.add_argument("--seed", nargs="*", action="extend", default=[], metavar="ID")

    p = sub.add_parser("chain", parents=[common], help="attack chains reaching a target")
    p.add_argument("--target", required=True)
    p.add_argument("--max-depth", type=_positive, default=8)
    p.add_argument("--all", action="store_true", dest="find_all")

    sub.add_parser("stats", parents=[common], help="measurement statistics")

    p = sub.add_parser("harden", parents=[common], help="recommend disclosures to remove")
    p.add_argument("--target", required=True)
    p.add_argument("--budget", type=_positive, default=1)
    return parser


def _err(stream: TextIO, message: str) -> None:
    color = stream.isatty() and "NO_COLOR" not in os.environ
    prefix = "\033[31merror:\033[0m" if color else "error:"
    print(f"{prefix} {message}", file=stream)


def _load(args: argparse.Namespace) -> Ecosystem:
    e = load_ecosystem_file(args.file)
    if args.no_sms:
        e = e.with_profile(e.profile.without_sms())
    return e


def _dispatch(args: argparse.Namespace, out: TextIO) -> int:
    e = _load(args)
    if args.command == "validate":
        for d in validate(e):
            print(d, file=out)
    elif args.command == "graph":
        g = build_tdg(e, args.max_group_size)
        if args.format == "dot":
            out.write(export_dot(g))
        else:
            stats = compute_stats(e) if e.accounts else StatsReport.empty()
            out.write(dumps_report(export_json(g, stats)))
    elif args.command == "closure":
        result = victim_closure(e, args.seed)
        out.write(dumps_report({"schema_version": SCHEMA_VERSION, "closure": _closure_doc(result)}))
    elif args.command == "chain":
        for chain in attack_chain(e, args.target, args.max_depth, args.find_all):
            print(chain, file=out)
    elif args.command == "stats":
        out.write(dumps_report({"schema_version": SCHEMA_VERSION, "stats": _stats_doc(compute_stats(e))}))
    elif args.command == "harden":
        cuts = harden(e, args.target, args.budget)
        doc = [
            {
                "account": c.account_id,
                "kind": str(c.kind),
                "before": c.before.cls.value,
                "after": c.after.cls.value,
                "after_depth": c.after.minimal_depth,
            }
            for c in cuts
        ]
        out.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def run(
    argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None
) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(parser.format_usage().rstrip(), file=stderr)
        _err(stderr, str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return _dispatch(args, stdout)
    except NoChainFound as exc:
        _err(stderr, f"no chain under attacker profile: target {exc.target!r} is not reachable")
        return EXIT_NO_CHAIN
    except (ActFortError, OSError) as exc:
        _err(stderr, f"{args.file}: {exc}")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
