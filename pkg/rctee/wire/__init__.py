"""
The wire module holds the bit-exact frame format, the message vocabulary, framed
socket transport and the REE proxy.
"""

from .codec import (
    HEADER_SIZE,
    MAX_FRAME_LENGTH,
    decode,
    decode_body,
    encode,
    encode_frame,
    frame_length,
    split_frame,
)
from .messages import (
    CONTROL_TYPES,
    MESSAGE_CLASSES,
    AttestRequest,
    AttestResponse,
    BusData,
    BusRead,
    ChallengeAnswer,
    ChallengeForward,
    ControlAck,
    DeployAck,
    DeployData,
    DeployRequest,
    Error,
    InjectTamper,
    InvokeRequest,
    InvokeResponse,
    LaunchSma,
    Message,
    MessageType,
    PcapData,
    PcapReadback,
    Ping,
    Pong,
    PowerOff,
    PowerOn,
    SetFirmware,
    StageQuery,
    StageReport,
    TtpReject,
    TtpVerifyRequest,
    TtpVerifyResponse,
    UserEnrollRequest,
    UserEnrollResponse,
)
from .proxy import Proxy
from .transport import (
    Address,
    FrameConnection,
    FrameHandler,
    FrameServer,
    LocalConnection,
    error_frame,
    format_address,
    message_handler,
    parse_address,
    read_frame,
)

__all__ = [
    "Address",
    "AttestRequest",
    "AttestResponse",
    "BusData",
    "BusRead",
    "CONTROL_TYPES",
    "ChallengeAnswer",
    "ChallengeForward",
    "ControlAck",
    "DeployAck",
    "DeployData",
    "DeployRequest",
    "Error",
    "FrameConnection",
    "FrameHandler",
    "FrameServer",
    "HEADER_SIZE",
    "InjectTamper",
    "InvokeRequest",
    "InvokeResponse",
    "LaunchSma",
    "LocalConnection",
    "MAX_FRAME_LENGTH",
    "MESSAGE_CLASSES",
    "Message",
    "MessageType",
    "PcapData",
    "PcapReadback",
    "Ping",
    "Pong",
    "PowerOff",
    "PowerOn",
    "Proxy",
    "SetFirmware",
    "StageQuery",
    "StageReport",
    "TtpReject",
    "TtpVerifyRequest",
    "TtpVerifyResponse",
    "UserEnrollRequest",
    "UserEnrollResponse",
    "decode",
    "decode_body",
    "encode",
    "encode_frame",
    "error_frame",
    "format_address",
    "frame_length",
    "message_handler",
    "parse_address",
    "read_frame",
    "split_frame",
]
