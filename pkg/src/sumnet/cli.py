"""Command line front end: ``sumnet gen|check|charset|xval|dot``.

Exit codes for ``check``: 0 feasible, 1 infeasible, 2 budget exceeded or
error. ``xval`` exits 1 on any disagreement.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .feasibility import (
    DEFAULT_BUDGET,
    MODES,
    NORMALIZED,
    BudgetExceeded,
    analytic_charset,
    brute_force_feasible,
    cross_validate,
)
from .field import parse_field
from .network import Network, NetworkError, deserialize, export_dot, realize, serialize

EXIT_FEASIBLE, EXIT_INFEASIBLE, EXIT_ERROR = 0, 1, 2


def _load_network(args) -> Network:
    if (args.spec is None) == (args.network is None):
        raise ValueError("give exactly one of a construction expression or --network FILE")
    if args.network is not None:
        return deserialize(Path(args.network).read_text())
    return realize(args.spec)


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_gen(args) -> int:
    net = realize(args.spec)
    text = serialize(net)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
        print(f"{net.name}: {len(net.nodes)} nodes, {len(net.edges)} edges -> {args.out}")
    return 0


def cmd_check(args) -> int:
    net = _load_network(args)
    field = parse_field(args.field)
    try:
        verdict = brute_force_feasible(net, field, args.mode, args.budget, jobs=args.jobs, seed=args.seed)
    except BudgetExceeded as exc:
        print(f"budget exceeded: search space {exc.required} > budget {exc.budget}")
        return EXIT_ERROR
    print(f"network: {net.name}")
    print(f"field: {field.designation} ({field})")
    print(f"mode: {verdict.mode}")
    print(f"verdict: {verdict.outcome.capitalize()}")
    print(f"search space: {verdict.search_space}")
    print(f"assignments examined: {verdict.examined}")
    if args.out is not None:
        Path(args.out).write_text(verdict.to_json())
        print(f"verdict written to {args.out}")
    return EXIT_FEASIBLE if verdict.feasible else EXIT_INFEASIBLE


def cmd_charset(args) -> int:
    print(analytic_charset(args.spec))
    return 0


def cmd_xval(args) -> int:
    fields = [parse_field(f) for f in args.fields.split(",") if f.strip()]
    try:
        report = cross_validate(args.spec, fields, args.mode, args.budget, jobs=args.jobs, seed=args.seed)
    except BudgetExceeded as exc:
        print(f"budget exceeded: search space {exc.required} > budget {exc.budget}")
        return EXIT_ERROR
    print(report)
    return 0 if report.all_agree else 1


def cmd_dot(args) -> int:
    _write(args.out, export_dot(_load_network(args)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumnet", description="Sum-network construction and feasibility checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def search_flags(p, default_mode):
        p.add_argument("--mode", choices=MODES, default=default_mode)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max assignments in the search space")
        p.add_argument("--seed", type=int, default=0, help="seed for witness verification trials")
        p.add_argument("--jobs", type=int, default=1, help="parallel search workers")

    p = sub.add_parser("gen", help="write the network file of a construction expression")
    p.add_argument("spec", help='e.g. "S(3)", "K(2,3)", "X(S(4),K(2,3))"')
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="exhaustive feasibility search over one field")
    p.add_argument("spec", nargs="?")
    p.add_argument("--network", help="network JSON file instead of an expression")
    p.add_argument("--field", required=True, help="field designation p^k")
    search_flags(p, NORMALIZED)
    p.add_argument("--out", help="write the verdict (and witness) JSON here")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("charset", help="analytic set of feasible characteristics")
    p.add_argument("spec")
    p.set_defaults(func=cmd_charset)

    p = sub.add_parser("xval", help="cross-validate search against the analytic set")
    p.add_argument("spec")
    p.add_argument("--fields", required=True, help="comma separated p^k list")
    search_flags(p, NORMALIZED)
    p.set_defaults(func=cmd_xval)

    p = sub.add_parser("dot", help="Graphviz export")
    p.add_argument("spec", nargs="?")
    p.add_argument("--network")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, NetworkError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
