"""rctee-client: the user side of the protocol."""

import argparse
import sys
from typing import List, Optional

from rctee.cli.common import EXIT_OK, base_parser, hex_bytes, run, settings_of
from rctee.client import ClientStore, DeviceSession, UserClient, load_manifest
from rctee.errors import ErrorCode, RcteeError
from rctee.wire import Address, FrameConnection, format_address, parse_address


def _store(args: argparse.Namespace) -> ClientStore:
    return ClientStore(args.home or settings_of(args).client.home)


def _ttp(args: argparse.Namespace) -> Address:
    return parse_address(args.ttp) if args.ttp else settings_of(args).client.ttp


def _device(args: argparse.Namespace) -> Address:
    if args.device:
        return parse_address(args.device)
    return settings_of(args).client.device


def _client(args: argparse.Namespace) -> UserClient:
    store = _store(args)
    return UserClient(store.load_identity(), store)


def _session(args: argparse.Namespace, store: ClientStore) -> DeviceSession:
    name = args.name or format_address(_device(args))
    session = store.load_session(name)
    if session is None:
        raise RcteeError(ErrorCode.BAD_STATE, f"no session with {name}; attest first")
    return session


def enroll(args: argparse.Namespace) -> int:
    with FrameConnection.connect(_ttp(args)) as ttp:
        client = UserClient.enroll(ttp, store=_store(args))
    print(f"uid {client.identity.uid.hex()}")
    return EXIT_OK


def attest(args: argparse.Namespace) -> int:
    client = _client(args)
    address = _device(args)
    with FrameConnection.connect(address) as device:
        with FrameConnection.connect(_ttp(args)) as ttp:
            session = client.attest(device, ttp, args.name or format_address(address))
        client.ping(device, session)
    print(f"session established with device {session.device_id.hex()}")
    return EXIT_OK


def deploy(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    client = _client(args)
    session = _session(args, client.store)
    with FrameConnection.connect(_device(args)) as device:
        client.deploy_manifest(device, session, manifest)
    print(f"deployed {', '.join(manifest.ips)}")
    return EXIT_OK


def invoke(args: argparse.Namespace) -> int:
    client = _client(args)
    session = _session(args, client.store)
    with FrameConnection.connect(_device(args)) as device:
        outputs = client.invoke(device, session, args.ip, args.inputs)
    for output in outputs:
        print(output.hex())
    return EXIT_OK


def status(args: argparse.Namespace) -> int:
    store = _store(args)
    identity = store.load_identity()
    print(f"uid {identity.uid.hex()}")
    print(f"PK_USER {identity.public_key.hex()}")
    for session in store.sessions():
        print(
            f"{session.device}: device {session.device_id.hex()} "
            f"deploy={session.deploy_counter} invoke={session.invoke_counter} "
            f"ips={','.join(session.ips) or '-'}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = base_parser("rctee-client", __doc__)
    parser.add_argument("--home", help="identity and session directory")
    commands = parser.add_subparsers()

    def command(
        name: str, func, summary: str, **addresses: bool
    ) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=summary)
        if addresses.get("ttp"):
            sub.add_argument("--ttp", help="host:port of the TTP")
        if addresses.get("device"):
            sub.add_argument("--device", help="host:port of the device proxy")
            sub.add_argument("--name", help="local device name; the address by default")
        sub.set_defaults(func=func)
        return sub

    command("enroll", enroll, "enroll a new identity at the TTP", ttp=True)
    command("attest", attest, "attest and authenticate a device", ttp=True, device=True)
    sub = command("deploy", deploy, "deploy a design", device=True)
    sub.add_argument("--manifest", required=True)
    sub = command("invoke", invoke, "run a deployed IP", device=True)
    sub.add_argument("--ip", required=True, help="IP name or hex id")
    sub.add_argument(
        "--in", dest="inputs", nargs="*", type=hex_bytes, default=[], help="hex inputs"
    )
    command("status", status, "show the identity and sessions")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    return run(build_parser(), argv)


if __name__ == "__main__":
    sys.exit(main())
