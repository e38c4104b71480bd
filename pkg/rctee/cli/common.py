"""Helpers shared by the command-line tools."""

import argparse
import logging
import sys
from typing import Callable, List, Optional

from rctee.config import Settings, load_settings
from rctee.crypto import KEY_SIZE, SymmetricKey
from rctee.errors import ErrorCode, RcteeError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_AUTH_FAILURE = 3
EXIT_NETWORK_ERROR = 4

AUTHENTICATION_FAILURES = frozenset(
    {
        ErrorCode.AUTH_FAIL,
        ErrorCode.BOOT_AUTH_FAIL,
        ErrorCode.CERT_INVALID,
        ErrorCode.DEVICE_AUTH_FAIL,
        ErrorCode.SIG_MISMATCH,
        ErrorCode.TA_AUTH_FAIL,
    }
)


def exit_code(error: RcteeError) -> int:
    if error.code is ErrorCode.NETWORK_ERROR:
        return EXIT_NETWORK_ERROR
    if error.code in AUTHENTICATION_FAILURES:
        return EXIT_AUTH_FAILURE
    return EXIT_REJECTED


def base_parser(prog: str, description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=prog, description=description)
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="more logging, repeatable"
    )
    parser.add_argument("--config", help="INI settings file")
    return parser


def configure_logging(verbosity: int) -> None:
    level = max(logging.DEBUG, logging.WARNING - 10 * verbosity)
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def settings_of(args: argparse.Namespace) -> Settings:
    return load_settings(args.config)


def read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as error:
        raise RcteeError(ErrorCode.BAD_PARAMS, f"cannot read {path}: {error}") from None


def write_bytes(path: str, data: bytes) -> None:
    with open(path, "wb") as handle:
        handle.write(data)


def read_key_file(path: str, label: bytes = b"bbram") -> SymmetricKey:
    """A 32-byte key stored raw or as 64 hex digits."""
    data = read_bytes(path)
    if len(data) != KEY_SIZE:
        try:
            data = bytes.fromhex(data.decode("ascii").strip())
        except ValueError:
            raise RcteeError(
                ErrorCode.BAD_KEY, f"{path} holds neither a raw nor a hex key"
            ) from None
    return SymmetricKey(data, label)


def hex_bytes(value: str) -> bytes:
    """argparse type for hexadecimal arguments."""
    try:
        return bytes.fromhex(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not hexadecimal: {value!r}") from None


def run(
    parser: argparse.ArgumentParser,
    argv: Optional[List[str]] = None,
) -> int:
    """Parses arguments, runs the selected ``func`` and maps errors to exit codes."""
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    command: Optional[Callable[[argparse.Namespace], int]] = getattr(args, "func", None)
    if command is None:
        parser.print_help()
        return EXIT_REJECTED
    try:
        return command(args)
    except RcteeError as error:
        print(f"error: {error}", file=sys.stderr)
        if error.reason is not None:
            print(f"reason: {error.reason.name}", file=sys.stderr)
        return exit_code(error)
