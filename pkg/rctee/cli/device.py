"""rctee-device: runs a simulated device and drives its control endpoint."""

import argparse
import sys
import threading
from typing import List, Optional

from rctee.cli.common import (
    EXIT_OK,
    base_parser,
    hex_bytes,
    read_bytes,
    read_key_file,
    run,
    settings_of,
)
from rctee.client import expect_reply
from rctee.device import FpgaSoc, World
from rctee.errors import ErrorCode, RcteeError, error_from_code
from rctee.host import DeviceHost
from rctee.image import PartitionKind
from rctee.wire import (
    ControlAck,
    FrameConnection,
    InjectTamper,
    LaunchSma,
    PcapData,
    PcapReadback,
    PowerOff,
    PowerOn,
    SetFirmware,
    StageQuery,
    StageReport,
    format_address,
    parse_address,
)


def serve(args: argparse.Namespace) -> int:
    settings = settings_of(args).device
    image = args.image or settings.image
    seed = args.device_seed or settings.device_seed
    if image is None or seed is None:
        raise RcteeError(ErrorCode.BAD_PARAMS, "an image and a device seed are needed")

    soc = FpgaSoc(seed, random_state=args.noise_seed)
    soc.program_bbram(read_key_file(args.key_file))
    soc.flash(read_bytes(image))
    host = DeviceHost(soc)
    host.serve(
        parse_address(args.proxy) if args.proxy else settings.proxy_listen,
        parse_address(args.control) if args.control else settings.control_listen,
    )
    try:
        host.power_on()
    except RcteeError as error:
        print(f"boot failed: {error}", file=sys.stderr)
    print(
        f"proxy on {format_address(host.proxy_address)}, "
        f"control on {format_address(host.control_address)}",
        file=sys.stderr,
    )
    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        host.stop()
    return EXIT_OK


def control(args: argparse.Namespace) -> int:
    if args.control:
        address = parse_address(args.control)
    else:
        address = settings_of(args).device.control_listen
    actions = {
        "power-on": lambda: PowerOn(),
        "power-off": lambda: PowerOff(),
        "launch-sma": lambda: LaunchSma(),
        "standard-firmware": lambda: SetFirmware(True),
        "custom-firmware": lambda: SetFirmware(False),
        "tamper": lambda: InjectTamper(
            int(PartitionKind[args.partition.upper()]), args.offset
        ),
        "stages": lambda: StageQuery(),
        "readback": lambda: PcapReadback(World.ROS),
    }
    with FrameConnection.connect(address) as connection:
        reply = connection.request(actions[args.action]())
    if isinstance(reply, StageReport):
        print(" > ".join(reply.stages))
        print(f"ocm slot {reply.ocm_slot.hex()}")
    elif isinstance(reply, PcapData):
        sys.stdout.buffer.write(reply.data)
    else:
        ack = expect_reply(reply, ControlAck)
        if ack.status != ErrorCode.OK:
            raise error_from_code(ack.status, ack.detail)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = base_parser("rctee-device", __doc__)
    commands = parser.add_subparsers()

    command = commands.add_parser("serve", help="boot a device and serve it")
    command.add_argument("--image")
    command.add_argument("--key-file", required=True, help="BBRAM key")
    command.add_argument("--device-seed", type=hex_bytes)
    command.add_argument("--noise-seed", type=int)
    command.add_argument("--proxy", help="host:port of the REE proxy")
    command.add_argument("--control", help="host:port of the control endpoint")
    command.set_defaults(func=serve)

    command = commands.add_parser("control", help="send one control message")
    command.add_argument(
        "action",
        choices=[
            "power-on",
            "power-off",
            "launch-sma",
            "standard-firmware",
            "custom-firmware",
            "tamper",
            "stages",
            "readback",
        ],
    )
    command.add_argument("--control", help="host:port of the control endpoint")
    command.add_argument(
        "--partition", default="bit", choices=[k.name.lower() for k in PartitionKind]
    )
    command.add_argument("--offset", type=int, default=0)
    command.set_defaults(func=control)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    return run(build_parser(), argv)


if __name__ == "__main__":
    sys.exit(main())
