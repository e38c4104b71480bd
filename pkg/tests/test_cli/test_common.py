import argparse

import pytest

from rctee.cli.common import (
    EXIT_AUTH_FAILURE,
    EXIT_NETWORK_ERROR,
    EXIT_OK,
    EXIT_REJECTED,
    base_parser,
    exit_code,
    hex_bytes,
    read_key_file,
    run,
)
from rctee.errors import ErrorCode, RcteeError


@pytest.mark.parametrize(
    "code, expected",
    [
        (ErrorCode.NETWORK_ERROR, EXIT_NETWORK_ERROR),
        (ErrorCode.SIG_MISMATCH, EXIT_AUTH_FAILURE),
        (ErrorCode.DEVICE_AUTH_FAIL, EXIT_AUTH_FAILURE),
        (ErrorCode.CRP_EXHAUSTED, EXIT_REJECTED),
        (ErrorCode.MANIFEST_INVALID, EXIT_REJECTED),
    ],
)
def test_exit_code(code, expected):
    assert exit_code(RcteeError(code, "x")) == expected


def test_read_key_file(tmp_path, bbram_key):
    raw = tmp_path / "raw.key"
    raw.write_bytes(bbram_key.key)
    hexed = tmp_path / "hex.key"
    hexed.write_text(bbram_key.key.hex() + "\n")
    broken = tmp_path / "broken.key"
    broken.write_text("not a key")

    assert read_key_file(str(raw)).key == bbram_key.key
    assert read_key_file(str(hexed)).key == bbram_key.key

    with pytest.raises(RcteeError) as record:
        read_key_file(str(broken))
    assert record.value.code is ErrorCode.BAD_KEY

    with pytest.raises(RcteeError) as record:
        read_key_file(str(tmp_path / "missing.key"))
    assert record.value.code is ErrorCode.BAD_PARAMS


def test_hex_bytes():
    assert hex_bytes("00ff") == b"\x00\xff"
    with pytest.raises(argparse.ArgumentTypeError):
        hex_bytes("xyz")


def test_run_maps_errors(capsys):
    def reject(args):
        raise RcteeError(ErrorCode.AUTH_FAIL, "tag mismatch")

    parser = base_parser("rctee-test", "test tool")
    commands = parser.add_subparsers()
    commands.add_parser("ok").set_defaults(func=lambda args: EXIT_OK)
    commands.add_parser("fail").set_defaults(func=reject)

    assert run(parser, ["ok"]) == EXIT_OK
    assert run(parser, ["fail"]) == EXIT_AUTH_FAILURE
    assert "tag mismatch" in capsys.readouterr().err

    # no command selected
    assert run(parser, []) == EXIT_REJECTED
