"""rctee-ttp: TTP administration and server."""

import argparse
import os
import sys
from typing import List, Optional

from rctee.cli.common import (
    EXIT_OK,
    base_parser,
    hex_bytes,
    run,
    settings_of,
    write_bytes,
)
from rctee.errors import ErrorCode, RcteeError
from rctee.ttp import TrustedThirdParty, TtpDatabase, TtpServer
from rctee.wire import format_address, parse_address


def _database_path(args: argparse.Namespace) -> str:
    return args.database or settings_of(args).ttp.database


def _open_ttp(args: argparse.Namespace) -> TrustedThirdParty:
    settings = settings_of(args).ttp
    path = _database_path(args)
    if not os.path.exists(path):
        raise RcteeError(
            ErrorCode.BAD_PARAMS, f"no TTP database at {path}; run 'rctee-ttp init'"
        )
    return TrustedThirdParty(
        TtpDatabase.load(path),
        crp_count=settings.crp_count,
        stability_checks=settings.crp_stability_checks,
    )


def init(args: argparse.Namespace) -> int:
    path = _database_path(args)
    if os.path.exists(path) and not args.force:
        raise RcteeError(ErrorCode.BAD_PARAMS, f"{path} exists; use --force")
    database = TtpDatabase()
    database.save(path)
    print(f"PK_TTP {database.keys.public.hex()}")
    return EXIT_OK


def enroll_device(args: argparse.Namespace) -> int:
    ttp = _open_ttp(args)
    enrollment = ttp.enroll_device(
        args.csp_id.encode("utf-8"),
        args.board_version.encode("utf-8"),
        args.device_seed,
        pcap_direct_access=args.standard_firmware,
    )
    write_bytes(args.image_out, enrollment.image.to_bytes())
    write_bytes(args.key_out, enrollment.record.bbram_key.key.hex().encode("ascii"))
    ttp.database.save(_database_path(args))
    print(f"device {enrollment.record.device_id.hex()}")
    return EXIT_OK


def enroll_user(args: argparse.Namespace) -> int:
    ttp = _open_ttp(args)
    cert, uid, pk_ttp = ttp.enroll_user(args.public_key)
    ttp.database.save(_database_path(args))
    print(f"uid {uid.hex()}")
    print(f"cert {cert.to_bytes().hex()}")
    print(f"PK_TTP {pk_ttp.hex()}")
    return EXIT_OK


def ledger(args: argparse.Namespace) -> int:
    print(_open_ttp(args).ledger().to_string(index=False))
    return EXIT_OK


def serve(args: argparse.Namespace) -> int:
    ttp = _open_ttp(args)
    address = (
        parse_address(args.listen) if args.listen else settings_of(args).ttp.listen
    )
    print(f"TTP listening on {format_address(address)}", file=sys.stderr)
    TtpServer(ttp, _database_path(args)).serve_forever(address)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = base_parser("rctee-ttp", __doc__)
    parser.add_argument("--database", help="TTP database file")
    commands = parser.add_subparsers()

    command = commands.add_parser("init", help="create a database with a fresh key")
    command.add_argument("--force", action="store_true")
    command.set_defaults(func=init)

    command = commands.add_parser("enroll-device", help="enroll a device")
    command.add_argument("--csp-id", required=True)
    command.add_argument("--board-version", required=True)
    command.add_argument("--device-seed", required=True, type=hex_bytes)
    command.add_argument("--standard-firmware", action="store_true")
    command.add_argument("--image-out", required=True)
    command.add_argument("--key-out", required=True, help="BBRAM key, hex")
    command.set_defaults(func=enroll_device)

    command = commands.add_parser("enroll-user", help="certify a user key")
    command.add_argument("--public-key", required=True, type=hex_bytes)
    command.set_defaults(func=enroll_user)

    command = commands.add_parser("ledger", help="CRP ledger of every device")
    command.set_defaults(func=ledger)

    command = commands.add_parser("serve", help="answer verification requests")
    command.add_argument("--listen", help="host:port")
    command.set_defaults(func=serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    return run(build_parser(), argv)


if __name__ == "__main__":
    sys.exit(main())
