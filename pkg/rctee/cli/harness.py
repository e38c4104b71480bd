"""rctee-harness: happy path, attack suite and authentication trials."""

import argparse
import sys
from typing import List, Optional

from rctee.cli.common import EXIT_OK, EXIT_REJECTED, base_parser, run
from rctee.harness import (
    authentication_trials,
    check_report,
    format_report,
    run_happy_path,
    run_suite,
    write_report,
)


def run_scenarios(args: argparse.Namespace) -> int:
    report = run_suite(args.scenario or None, seed=args.seed)
    if args.report:
        write_report(report, args.report)
    else:
        sys.stdout.write(format_report(report))
    check_report(report)
    return EXIT_OK


def happy_path(args: argparse.Namespace) -> int:
    print(run_happy_path(args.seed).to_string(index=False))
    return EXIT_OK


def trials(args: argparse.Namespace) -> int:
    table = authentication_trials(args.n, args.seed)
    print(table.to_string(index=False))
    genuine, emulated = table.set_index("device")["pass_rate"][["genuine", "emulated"]]
    return EXIT_OK if emulated == 0 and genuine >= 0.99 else EXIT_REJECTED


def build_parser() -> argparse.ArgumentParser:
    parser = base_parser("rctee-harness", __doc__)
    commands = parser.add_subparsers()

    command = commands.add_parser("run", help="play the attack scenarios")
    command.add_argument(
        "--scenario", action="append", help="repeatable; all if absent"
    )
    command.add_argument("--seed", type=int, default=0)
    command.add_argument("--report", help="write the report there")
    command.set_defaults(func=run_scenarios)

    command = commands.add_parser("happy-path", help="run every protocol step once")
    command.add_argument("--seed", type=int, default=0)
    command.set_defaults(func=happy_path)

    command = commands.add_parser("trials", help="device authentication pass rates")
    command.add_argument("--n", type=int, default=100)
    command.add_argument("--seed", type=int, default=0)
    command.set_defaults(func=trials)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    return run(build_parser(), argv)


if __name__ == "__main__":
    sys.exit(main())
