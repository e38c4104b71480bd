"""Frame codec: ``length (4, big-endian) || type (1) || payload``."""

import struct
from typing import Tuple

from rctee.errors import ErrorCode, RcteeError
from rctee.wire.messages import MESSAGE_CLASSES, Message, MessageType

HEADER_SIZE = 4
MAX_FRAME_LENGTH = 64 * 1024 * 1024


def encode_frame(message_type: int, payload: bytes) -> bytes:
    length = 1 + len(payload)
    if length > MAX_FRAME_LENGTH:
        raise RcteeError(
            ErrorCode.OVERSIZE, f"frame of {length} bytes exceeds {MAX_FRAME_LENGTH}"
        )
    return struct.pack(">IB", length, message_type) + bytes(payload)


def frame_length(header: bytes) -> int:
    """
    Validates the 4-byte header and returns the length of type + payload.

    Raises
    ------
    RcteeError
        OVERSIZE above 64 MiB, MALFORMED for a zero length or short header.
    """
    if len(header) != HEADER_SIZE:
        raise RcteeError(ErrorCode.MALFORMED, "frame header truncated")
    (length,) = struct.unpack(">I", header)
    if length > MAX_FRAME_LENGTH:
        raise RcteeError(
            ErrorCode.OVERSIZE, f"declared length {length} exceeds {MAX_FRAME_LENGTH}"
        )
    if length == 0:
        raise RcteeError(ErrorCode.MALFORMED, "frame without a type byte")
    return length


def split_frame(frame: bytes) -> Tuple[int, bytes]:
    """(type byte, payload) of a complete frame, without looking into the payload."""
    length = frame_length(bytes(frame[:HEADER_SIZE]))
    if len(frame) != HEADER_SIZE + length:
        raise RcteeError(
            ErrorCode.MALFORMED,
            f"frame declares {length} bytes but carries {len(frame) - HEADER_SIZE}",
        )
    return frame[HEADER_SIZE], bytes(frame[HEADER_SIZE + 1 :])


def encode(message: Message) -> bytes:
    return encode_frame(message.TYPE, message.encode_payload())


def decode_body(message_type: int, payload: bytes) -> Message:
    try:
        cls = MESSAGE_CLASSES[MessageType(message_type)]
    except ValueError:
        raise RcteeError(
            ErrorCode.UNKNOWN_TYPE, f"unknown message type {message_type:#04x}"
        ) from None
    return cls.decode_payload(payload)


def decode(frame: bytes) -> Message:
    """
    Parses a complete frame.

    Raises
    ------
    RcteeError
        MALFORMED, OVERSIZE or UNKNOWN_TYPE; no other exception escapes.
    """
    message_type, payload = split_frame(frame)
    return decode_body(message_type, payload)
