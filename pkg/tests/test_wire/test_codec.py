import struct

import numpy as np
import pytest

from rctee.crypto import issue_certificate, sign_keygen
from rctee.errors import ErrorCode, RcteeError
from rctee.puf import Challenge
from rctee.wire import (
    HEADER_SIZE,
    MAX_FRAME_LENGTH,
    MESSAGE_CLASSES,
    AttestRequest,
    DeployData,
    Error,
    MessageType,
    TtpVerifyResponse,
    decode,
    encode,
    encode_frame,
    frame_length,
    split_frame,
)

DECODE_ERRORS = {ErrorCode.MALFORMED, ErrorCode.OVERSIZE, ErrorCode.UNKNOWN_TYPE}


def test_frame_layout():
    frame = encode_frame(MessageType.PING, b"abc")

    assert frame == b"\x00\x00\x00\x04\x0eabc"
    assert split_frame(frame) == (MessageType.PING, b"abc")


def test_every_message_type_is_registered():
    assert set(MESSAGE_CLASSES) == set(MessageType)


def test_bulk_fields_carry_an_eight_byte_length():
    frame = encode(DeployData(b"\xaa" * 3))

    assert frame[HEADER_SIZE + 1 :] == struct.pack(">Q", 3) + b"\xaa" * 3


def test_structured_fields():
    keys = sign_keygen(b"\x01" * 32)
    cert = issue_certificate(keys, b"device-id-0123456789abcdef01234", keys.public)
    challenge = Challenge(((0, 1), (63, 2)))
    message = TtpVerifyResponse(cert, challenge, b"\x07" * 48)

    assert decode(encode(message)) == message
    assert decode(encode(AttestRequest(cert))).cert == cert


def test_error_detail_is_truncated():
    error = Error.from_exception(RcteeError(ErrorCode.AUTH_FAIL, "x" * 5000))

    assert error.code == ErrorCode.AUTH_FAIL
    assert len(error.detail) == 1024


@pytest.mark.parametrize(
    "header, code",
    [
        (struct.pack(">I", MAX_FRAME_LENGTH + 1), ErrorCode.OVERSIZE),
        (struct.pack(">I", 0), ErrorCode.MALFORMED),
        (b"\x00\x00", ErrorCode.MALFORMED),
    ],
)
def test_bad_headers(header, code):
    with pytest.raises(RcteeError) as record:
        frame_length(header)
    assert record.value.code is code


def test_frame_at_the_size_limit():
    assert frame_length(struct.pack(">I", MAX_FRAME_LENGTH)) == MAX_FRAME_LENGTH

    with pytest.raises(RcteeError) as record:
        encode_frame(MessageType.DEPLOY_DATA, bytes(MAX_FRAME_LENGTH))
    assert record.value.code is ErrorCode.OVERSIZE


def test_length_must_match_the_frame():
    frame = encode_frame(MessageType.PING, b"abc")

    for broken in (frame[:-1], frame + b"\x00"):
        with pytest.raises(RcteeError) as record:
            decode(broken)
        assert record.value.code is ErrorCode.MALFORMED


def test_unknown_type():
    with pytest.raises(RcteeError) as record:
        decode(encode_frame(0x7F, b""))
    assert record.value.code is ErrorCode.UNKNOWN_TYPE


def test_trailing_payload_bytes():
    frame = encode_frame(MessageType.DEPLOY_ACK, b"\x00\x00\x00")

    with pytest.raises(RcteeError) as record:
        decode(frame)
    assert record.value.code is ErrorCode.MALFORMED


def test_fuzzed_frames_fail_cleanly():
    rng = np.random.RandomState(2024)
    valid = [encode(DeployData(b"\x01" * 20)), encode_frame(MessageType.PING, b"\x00")]
    decoded = 0

    for k in range(10_000):
        if k % 2:
            # well-formed header around a random type and payload
            payload = rng.bytes(rng.randint(0, 64))
            frame = encode_frame(rng.randint(0, 256), payload)
        else:
            # a valid frame with a few bytes overwritten
            frame = bytearray(valid[k % 4 // 2])
            for position in rng.randint(0, len(frame), size=rng.randint(1, 4)):
                frame[position] = rng.randint(0, 256)
            frame = bytes(frame)
        try:
            decode(frame)
            decoded += 1
        except RcteeError as error:
            assert error.code in DECODE_ERRORS

    assert 0 < decoded < 10_000
