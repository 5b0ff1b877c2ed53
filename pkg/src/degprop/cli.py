"""Command-line interface.

    degprop repair   --data FILE [--format table1|json|csv]
    degprop allocate --data FILE [--house 700] [--format table2|table1|json|csv]
    degprop verify   --data FILE [--house 700] [--format json]
    degprop sweep    --data FILE --from 694 --to 710

Exit status: 0 success, 1 bad input or infeasible house size, 2 the
allocation was computed but failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from degprop.allocator import AllocationError
from degprop.degressivity import RepairError, repair
from degprop.domain import (
    DEFAULT_BASE_SEATS,
    DEFAULT_CAP_SEATS,
    DEFAULT_FLOOR_SEATS,
    RegistryError,
    fixture_path,
    load_registry,
)
from degprop.pipeline import run_pipeline, sweep
from degprop.report import (
    STYLES,
    render_repair,
    render_report,
    render_sweep,
    render_verification,
    verification_to_json,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2

DEFAULT_FORMATS = {"repair": "table1", "allocate": "table2", "verify": "table2", "sweep": "table2"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="degprop", description="No-loss degressive seat apportionment.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--data", required=True, help="registry CSV file")
    common.add_argument("--base", type=_non_negative, default=DEFAULT_BASE_SEATS,
                        help="base seats per state (default: %(default)s)")
    common.add_argument("--floor", type=_positive, default=DEFAULT_FLOOR_SEATS,
                        help="minimum seats per state (default: %(default)s)")
    common.add_argument("--cap", type=_positive, default=DEFAULT_CAP_SEATS,
                        help="maximum seats per state (default: %(default)s)")
    common.add_argument("--format", choices=STYLES, default=None)

    sub.add_parser("repair", parents=[common], help="stages A and B: add-on seats")
    for name, text in (("allocate", "full allocation report"), ("verify", "constraint checks")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--house", type=_positive, default=700,
                       help="house size (default: %(default)s)")
    p = sub.add_parser("sweep", parents=[common], help="allocate a range of house sizes")
    p.add_argument("--from", dest="house_from", type=_positive, required=True)
    p.add_argument("--to", dest="house_to", type=_positive, required=True)
    return parser


def resolve_data_path(text: str) -> Path:
    """The given path, or a bundled fixture of that bare file name."""
    path = Path(text)
    if not path.exists() and path.name == text:
        bundled = fixture_path(text)
        if bundled.exists():
            return bundled
    return path


def run(argv: list[str] | None, out=sys.stdout, err=sys.stderr) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "sweep" and args.house_from > args.house_to:
            raise UsageError(f"--from {args.house_from} is greater than --to {args.house_to}")
    except UsageError as exc:
        print(f"degprop: error: {exc}", file=err)
        return EXIT_INPUT
    style = args.format or DEFAULT_FORMATS[args.command]
    path = resolve_data_path(args.data)
    try:
        registry = load_registry(
            path, base_seats=args.base, floor_seats=args.floor, cap_seats=args.cap
        )
        if args.command == "repair":
            out.write(render_repair(registry, repair(registry), style))
            return EXIT_OK
        if args.command == "sweep":
            entries = sweep(registry, args.house_from, args.house_to)
            out.write(render_sweep(entries, style))
            if any(e.result is None for e in entries):
                return EXIT_INPUT
            return EXIT_OK if all(e.result.ok for e in entries) else EXIT_VERIFY
        result = run_pipeline(registry, args.house)
    except FileNotFoundError:
        print(f"degprop: error: data file not found: {args.data}", file=err)
        return EXIT_INPUT
    except (RegistryError, RepairError, AllocationError) as exc:
        print(f"degprop: error: {exc}", file=err)
        return EXIT_INPUT

    if args.command == "verify":
        if style == "json":
            out.write(json.dumps(verification_to_json(result), indent=2) + "\n")
        else:
            out.write(render_verification(result))
    else:
        out.write(render_report(result, style))
    if not result.ok:
        failed = ", ".join(c.name for c in result.verification.checks if not c.passed)
        print(f"degprop: verification failed: {failed}", file=err)
        return EXIT_VERIFY
    return EXIT_OK


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
