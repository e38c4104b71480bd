"""On-disk state of the user client: one identity file and one file per device."""

import logging
import os
import re
from typing import Optional

from rctee.binary import Reader, Writer
from rctee.client.identity import UserIdentity
from rctee.client.session import DeviceSession
from rctee.crypto import SESSION_LABEL, Certificate, SymmetricKey, sign_keygen
from rctee.errors import ErrorCode, RcteeError
from rctee.image import BitstreamContainer, decode_bitstream
from rctee.puf import Challenge

logger = logging.getLogger(__name__)

IDENTITY_MAGIC = b"RCUI"
SESSION_MAGIC = b"RCUS"
FORMAT_VERSION = 1

IDENTITY_FILE = "identity.bin"
SESSION_DIR = "sessions"


def _check_header(reader: Reader, magic: bytes) -> None:
    if reader.take(len(magic)) != magic or reader.u16() != FORMAT_VERSION:
        raise RcteeError(ErrorCode.MALFORMED, f"not a {magic.decode()} file")


def encode_identity(identity: UserIdentity) -> bytes:
    writer = Writer().raw(IDENTITY_MAGIC).u16(FORMAT_VERSION)
    writer.short_bytes(identity.uid).short_bytes(identity.keys.secret)
    writer.short_bytes(identity.cert.to_bytes()).short_bytes(identity.pk_ttp)
    return writer.getvalue()


def decode_identity(data: bytes) -> UserIdentity:
    reader = Reader(data)
    _check_header(reader, IDENTITY_MAGIC)
    uid = reader.short_bytes()
    keys = sign_keygen(reader.short_bytes())
    cert = Certificate.from_bytes(reader.short_bytes())
    pk_ttp = reader.short_bytes()
    reader.finish()
    return UserIdentity(uid, keys, cert, pk_ttp)


def encode_session(session: DeviceSession) -> bytes:
    writer = Writer().raw(SESSION_MAGIC).u16(FORMAT_VERSION)
    writer.short_bytes(session.device.encode("utf-8"))
    writer.short_bytes(session.pk_dev)
    writer.short_bytes(session.cert_dev.to_bytes())
    writer.short_bytes(session.challenge.to_bytes())
    writer.short_bytes(session.credential_digest)
    writer.short_bytes(session.session_key.key)
    writer.u64(session.deploy_counter).u64(session.invoke_counter)
    writer.u64(session.ping_counter)
    writer.u16(len(session.ips))
    for name in session.ips:
        writer.short_bytes(name.encode("utf-8"))
    if session.ips:
        writer.bulk_bytes(BitstreamContainer(tuple(session.ips.values())).to_bytes())
    return writer.getvalue()


def decode_session(data: bytes) -> DeviceSession:
    reader = Reader(data)
    _check_header(reader, SESSION_MAGIC)
    device = reader.short_bytes().decode("utf-8")
    pk_dev = reader.short_bytes()
    cert_dev = Certificate.from_bytes(reader.short_bytes())
    challenge = Challenge.from_bytes(reader.short_bytes())
    digest = reader.short_bytes()
    session_key = SymmetricKey(reader.short_bytes(), SESSION_LABEL)
    counters = reader.u64(), reader.u64(), reader.u64()
    names = [reader.short_bytes().decode("utf-8") for _ in range(reader.u16())]
    ips = {}
    if names:
        design = decode_bitstream(reader.bulk_bytes())
        ips = dict(zip(names, design.ips))
    reader.finish()
    return DeviceSession(
        device,
        pk_dev,
        cert_dev,
        challenge,
        digest,
        session_key,
        *counters,
        ips=ips,
    )


class ClientStore:
    """
    Directory holding the user's identity and per-device session files.

    Parameters
    ----------
    home : str
        Created on first write.
    """

    def __init__(self, home: str) -> None:
        self.home = home

    def _write(self, path: str, data: bytes) -> None:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp_path = f"{path}.tmp"
        with open(tmp_path, "wb") as handle:
            handle.write(data)
        os.replace(tmp_path, path)

    @property
    def identity_path(self) -> str:
        return os.path.join(self.home, IDENTITY_FILE)

    def session_path(self, device: str) -> str:
        name = re.sub(r"[^A-Za-z0-9_.-]", "_", device)
        return os.path.join(self.home, SESSION_DIR, f"{name}.bin")

    def save_identity(self, identity: UserIdentity) -> None:
        self._write(self.identity_path, encode_identity(identity))
        logger.info("identity %s saved in %s", identity.uid.hex(), self.home)

    def load_identity(self) -> UserIdentity:
        try:
            with open(self.identity_path, "rb") as handle:
                return decode_identity(handle.read())
        except FileNotFoundError:
            raise RcteeError(
                ErrorCode.UNKNOWN_USER, f"no identity in {self.home}; enroll first"
            ) from None

    def save_session(self, session: DeviceSession) -> None:
        self._write(self.session_path(session.device), encode_session(session))

    def load_session(self, device: str) -> Optional[DeviceSession]:
        try:
            with open(self.session_path(device), "rb") as handle:
                return decode_session(handle.read())
        except FileNotFoundError:
            return None

    def sessions(self):
        directory = os.path.join(self.home, SESSION_DIR)
        if not os.path.isdir(directory):
            return []
        out = []
        for name in sorted(os.listdir(directory)):
            if name.endswith(".bin"):
                with open(os.path.join(directory, name), "rb") as handle:
                    out.append(decode_session(handle.read()))
        return out
