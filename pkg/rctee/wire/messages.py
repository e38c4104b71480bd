"""
Message vocabulary of the protocol.

Each message is a frozen dataclass with a type code and an ordered list of
fields. Fields are encoded one after the other: byte strings up to 64 KiB carry
a 2-byte length prefix, bulk fields (bitstreams, sealed blobs, readbacks) an
8-byte one, integers are big-endian.
"""

from dataclasses import dataclass, fields
from enum import IntEnum
from typing import Any, Callable, ClassVar, Dict, Tuple, Type

from rctee.binary import Reader, Writer
from rctee.crypto import Certificate
from rctee.device import World
from rctee.errors import ErrorCode, RcteeError
from rctee.puf import Challenge


class MessageType(IntEnum):
    ATTEST_REQUEST = 0x01
    ATTEST_RESPONSE = 0x02
    TTP_VERIFY_REQUEST = 0x03
    TTP_VERIFY_RESPONSE = 0x04
    TTP_REJECT = 0x05
    CHALLENGE_FORWARD = 0x06
    CHALLENGE_ANSWER = 0x07
    DEPLOY_DATA = 0x08
    DEPLOY_REQUEST = 0x09
    DEPLOY_ACK = 0x0A
    INVOKE_REQUEST = 0x0B
    INVOKE_RESPONSE = 0x0C
    ERROR = 0x0D
    PING = 0x0E
    PONG = 0x0F
    USER_ENROLL_REQUEST = 0x10
    USER_ENROLL_RESPONSE = 0x11

    # harness control
    POWER_ON = 0x20
    POWER_OFF = 0x21
    INJECT_TAMPER = 0x22
    SET_FIRMWARE = 0x23
    STAGE_QUERY = 0x24
    STAGE_REPORT = 0x25
    CONTROL_ACK = 0x26
    PCAP_READBACK = 0x27
    PCAP_DATA = 0x28
    BUS_READ = 0x29
    BUS_DATA = 0x2A
    LAUNCH_SMA = 0x2B


CONTROL_TYPES = frozenset(t for t in MessageType if 0x20 <= t <= 0x2F)


# ---------------------------------------------------------------------------
# field codecs
# ---------------------------------------------------------------------------


def _read_bool(reader: Reader) -> bool:
    value = reader.u8()
    if value not in (0, 1):
        raise RcteeError(ErrorCode.MALFORMED, f"boolean field holds {value}")
    return bool(value)


def _read_text(reader: Reader) -> str:
    try:
        return reader.short_bytes().decode("utf-8")
    except UnicodeDecodeError:
        raise RcteeError(ErrorCode.MALFORMED, "text field is not UTF-8") from None


_WORLD_CODES = {World.TOS: 0, World.ROS: 1}
_WORLDS = {code: world for world, code in _WORLD_CODES.items()}


def _read_world(reader: Reader) -> World:
    code = reader.u8()
    if code not in _WORLDS:
        raise RcteeError(ErrorCode.MALFORMED, f"unknown world {code}")
    return _WORLDS[code]


def _write_texts(writer: Writer, values: Tuple[str, ...]) -> None:
    writer.u16(len(values))
    for value in values:
        writer.short_bytes(value.encode("utf-8"))


def _read_texts(reader: Reader) -> Tuple[str, ...]:
    return tuple(_read_text(reader) for _ in range(reader.u16()))


FieldCodec = Tuple[Callable[[Writer, Any], Any], Callable[[Reader], Any]]

SHORT: FieldCodec = (lambda w, v: w.short_bytes(v), lambda r: r.short_bytes())
BULK: FieldCodec = (lambda w, v: w.bulk_bytes(v), lambda r: r.bulk_bytes())
U8: FieldCodec = (lambda w, v: w.u8(v), lambda r: r.u8())
U16: FieldCodec = (lambda w, v: w.u16(v), lambda r: r.u16())
U64: FieldCodec = (lambda w, v: w.u64(v), lambda r: r.u64())
BOOL: FieldCodec = (lambda w, v: w.u8(1 if v else 0), _read_bool)
TEXT: FieldCodec = (lambda w, v: w.short_bytes(v.encode("utf-8")), _read_text)
TEXTS: FieldCodec = (_write_texts, _read_texts)
WORLD: FieldCodec = (lambda w, v: w.u8(_WORLD_CODES[v]), _read_world)
CERT: FieldCodec = (
    lambda w, v: w.short_bytes(v.to_bytes()),
    lambda r: Certificate.from_bytes(r.short_bytes()),
)
CHALLENGE: FieldCodec = (
    lambda w, v: w.short_bytes(v.to_bytes()),
    lambda r: Challenge.from_bytes(r.short_bytes()),
)


class Message:
    """Base class of every protocol message."""

    TYPE: ClassVar[MessageType]
    CODECS: ClassVar[Tuple[FieldCodec, ...]] = ()

    def values(self) -> Tuple[Any, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))

    def encode_payload(self) -> bytes:
        writer = Writer()
        for (write, _), value in zip(self.CODECS, self.values()):
            write(writer, value)
        return writer.getvalue()

    @classmethod
    def decode_payload(cls, payload: bytes) -> "Message":
        reader = Reader(payload)
        values = [read(reader) for _, read in cls.CODECS]
        reader.finish()
        return cls(*values)


MESSAGE_CLASSES: Dict[MessageType, Type[Message]] = {}


def _message(message_type: MessageType, *codecs: FieldCodec):
    def decorator(cls):
        cls = dataclass(frozen=True)(cls)
        cls.TYPE = message_type
        cls.CODECS = codecs
        MESSAGE_CLASSES[message_type] = cls
        return cls

    return decorator


# ---------------------------------------------------------------------------
# protocol messages
# ---------------------------------------------------------------------------


@_message(MessageType.ATTEST_REQUEST, CERT)
class AttestRequest(Message):
    cert: Certificate


@_message(MessageType.ATTEST_RESPONSE, SHORT, SHORT)
class AttestResponse(Message):
    delta: bytes
    epsilon: bytes


@_message(MessageType.TTP_VERIFY_REQUEST, SHORT, SHORT)
class TtpVerifyRequest(Message):
    delta: bytes
    epsilon: bytes


@_message(MessageType.TTP_VERIFY_RESPONSE, CERT, CHALLENGE, SHORT)
class TtpVerifyResponse(Message):
    cert_dev: Certificate
    challenge: Challenge
    credential_digest: bytes


@_message(MessageType.TTP_REJECT, U16)
class TtpReject(Message):
    reason: int


@_message(MessageType.CHALLENGE_FORWARD, CHALLENGE)
class ChallengeForward(Message):
    challenge: Challenge


@_message(MessageType.CHALLENGE_ANSWER, SHORT)
class ChallengeAnswer(Message):
    digest: bytes


@_message(MessageType.DEPLOY_DATA, BULK)
class DeployData(Message):
    enc_bin: bytes


@_message(MessageType.DEPLOY_REQUEST, SHORT)
class DeployRequest(Message):
    signature: bytes


@_message(MessageType.DEPLOY_ACK, U16)
class DeployAck(Message):
    status: int


@_message(MessageType.INVOKE_REQUEST, BULK)
class InvokeRequest(Message):
    sealed: bytes


@_message(MessageType.INVOKE_RESPONSE, BULK)
class InvokeResponse(Message):
    sealed: bytes


@_message(MessageType.ERROR, U16, TEXT)
class Error(Message):
    code: int
    detail: str = ""

    @classmethod
    def from_exception(cls, error: RcteeError) -> "Error":
        return cls(int(error.code), error.detail[:1024])


@_message(MessageType.PING, SHORT)
class Ping(Message):
    sealed: bytes


@_message(MessageType.PONG, SHORT)
class Pong(Message):
    sealed: bytes


@_message(MessageType.USER_ENROLL_REQUEST, SHORT)
class UserEnrollRequest(Message):
    public_key: bytes


@_message(MessageType.USER_ENROLL_RESPONSE, CERT, SHORT, SHORT)
class UserEnrollResponse(Message):
    cert: Certificate
    uid: bytes
    ttp_public: bytes


# ---------------------------------------------------------------------------
# harness control
# ---------------------------------------------------------------------------


@_message(MessageType.POWER_ON)
class PowerOn(Message):
    pass


@_message(MessageType.POWER_OFF)
class PowerOff(Message):
    pass


@_message(MessageType.INJECT_TAMPER, U8, U64)
class InjectTamper(Message):
    partition: int
    offset: int = 0


@_message(MessageType.SET_FIRMWARE, BOOL)
class SetFirmware(Message):
    pcap_direct_access: bool


@_message(MessageType.STAGE_QUERY)
class StageQuery(Message):
    pass


@_message(MessageType.STAGE_REPORT, TEXTS, SHORT)
class StageReport(Message):
    stages: Tuple[str, ...]
    ocm_slot: bytes


@_message(MessageType.CONTROL_ACK, U16, TEXT)
class ControlAck(Message):
    status: int
    detail: str = ""


@_message(MessageType.PCAP_READBACK, WORLD)
class PcapReadback(Message):
    world: World


@_message(MessageType.PCAP_DATA, BULK)
class PcapData(Message):
    data: bytes


@_message(MessageType.BUS_READ, WORLD, U64, U64)
class BusRead(Message):
    world: World
    address: int
    length: int


@_message(MessageType.BUS_DATA, BULK)
class BusData(Message):
    data: bytes


@_message(MessageType.LAUNCH_SMA)
class LaunchSma(Message):
    pass
