import pytest

from rctee.errors import ErrorCode, RcteeError
from rctee.puf import Challenge, Response


def test_challenge_encoding():
    challenge = Challenge(((1, 2), (255, 0)))

    assert challenge.to_bytes() == b"\x00\x02\x01\x02\xff\x00"
    assert Challenge.from_bytes(challenge.to_bytes()) == challenge


def test_challenge_decoding_errors():
    with pytest.raises(RcteeError) as record:
        Challenge.from_bytes(b"\x00\x02\x01\x02\xff")
    assert record.value.code is ErrorCode.MALFORMED

    with pytest.raises(RcteeError):
        Challenge.from_bytes(b"\x00")

    with pytest.raises(RcteeError):
        Challenge(((0, 256),)).to_bytes()


def test_response_is_packed_msb_first():
    response = Response((1, 0, 0, 0, 0, 0, 0, 1, 1))

    assert response.packed() == b"\x81\x80"
    assert Response.from_packed(response.packed(), 9) == response
    assert Response.from_bytes(response.to_bytes()) == response

    with pytest.raises(RcteeError):
        Response.from_packed(b"\x81", 9)
