"""rctee-image: offline packaging and inspection of bootable images."""

import argparse
import os
import sys
from typing import List, Optional

from rctee.cli.common import (
    EXIT_OK,
    base_parser,
    read_bytes,
    read_key_file,
    run,
    write_bytes,
)
from rctee.client import load_manifest
from rctee.errors import ErrorCode, RcteeError
from rctee.image import (
    BootableImage,
    Partition,
    PartitionKind,
    package,
    unpack_and_measure,
)


def _partition(entry: str) -> Partition:
    kind, sep, path = entry.partition("=")
    if not sep:
        raise RcteeError(ErrorCode.BAD_PARAMS, f"expected KIND=PATH. Got {entry!r}.")
    try:
        partition_kind = PartitionKind[kind.strip().upper()]
    except KeyError:
        raise RcteeError(ErrorCode.BAD_PARAMS, f"unknown partition {kind!r}") from None
    return Partition(partition_kind, read_bytes(path))


def pack(args: argparse.Namespace) -> int:
    partitions = [_partition(entry) for entry in args.partition]
    image = package(partitions, read_key_file(args.key_file), os.urandom)
    write_bytes(args.out, image.to_bytes())
    return EXIT_OK


def unpack(args: argparse.Namespace) -> int:
    image = BootableImage.from_bytes(read_bytes(args.image))
    partitions, _ = unpack_and_measure(image, read_key_file(args.key_file))
    os.makedirs(args.out_dir, exist_ok=True)
    for partition in partitions:
        path = os.path.join(args.out_dir, f"{partition.kind.name.lower()}.bin")
        write_bytes(path, partition.payload)
    return EXIT_OK


def measure(args: argparse.Namespace) -> int:
    image = BootableImage.from_bytes(read_bytes(args.image))
    _, measurements = unpack_and_measure(image, read_key_file(args.key_file))
    for kind, digest in measurements.entries:
        print(f"{kind.name:<8} {digest.hex()}")
    print(f"H_BOOT   {measurements.h_boot().hex()}")
    return EXIT_OK


def make_bitstream(args: argparse.Namespace) -> int:
    write_bytes(args.out, load_manifest(args.manifest).to_bytes())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = base_parser("rctee-image", __doc__)
    commands = parser.add_subparsers()

    command = commands.add_parser("pack", help="encrypt partitions into an image")
    command.add_argument("--key-file", required=True)
    command.add_argument(
        "--partition", action="append", required=True, help="KIND=PATH, repeatable"
    )
    command.add_argument("--out", required=True)
    command.set_defaults(func=pack)

    command = commands.add_parser("unpack", help="decrypt partitions to files")
    command.add_argument("image")
    command.add_argument("--key-file", required=True)
    command.add_argument("--out-dir", required=True)
    command.set_defaults(func=unpack)

    command = commands.add_parser("measure", help="print the boot measurements")
    command.add_argument("image")
    command.add_argument("--key-file", required=True)
    command.set_defaults(func=measure)

    command = commands.add_parser(
        "make-bitstream", help="encode a manifest as a plaintext bitstream"
    )
    command.add_argument("--manifest", required=True)
    command.add_argument("--out", required=True)
    command.set_defaults(func=make_bitstream)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    return run(build_parser(), argv)


if __name__ == "__main__":
    sys.exit(main())
