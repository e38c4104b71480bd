from rctee.errors import ErrorCode
from rctee.sma import SessionState, SmaEndpoint
from rctee.wire import (
    AttestRequest,
    AttestResponse,
    ChallengeAnswer,
    ChallengeForward,
    DeployAck,
    DeployRequest,
    Error,
    PowerOn,
    decode,
    encode,
    encode_frame,
)


def _exchange(endpoint, message):
    (reply,) = endpoint.handle_frame(encode(message))
    return decode(reply)


def test_attestation_through_frames(app, user_cert, stable_challenge):
    endpoint = SmaEndpoint(app)

    response = _exchange(endpoint, AttestRequest(user_cert))
    assert isinstance(response, AttestResponse)

    answer = _exchange(endpoint, ChallengeForward(stable_challenge))
    assert isinstance(answer, ChallengeAnswer)
    assert len(answer.digest) == 48
    assert app.session.state is SessionState.ESTABLISHED


def test_errors_become_error_frames(app):
    endpoint = SmaEndpoint(app)

    reply = _exchange(endpoint, DeployRequest(b"\x00" * 64))
    assert reply == Error(ErrorCode.BAD_STATE, reply.detail)

    reply = _exchange(endpoint, PowerOn())
    assert reply.code == ErrorCode.UNKNOWN_TYPE

    (raw,) = endpoint.handle_frame(encode_frame(0x0A, b"\x00"))
    assert decode(raw).code == ErrorCode.MALFORMED


def test_deploy_request_acknowledges_failures(app, user_cert, stable_challenge):
    endpoint = SmaEndpoint(app)
    _exchange(endpoint, AttestRequest(user_cert))
    _exchange(endpoint, ChallengeForward(stable_challenge))

    reply = _exchange(endpoint, DeployRequest(b"\x00" * 64))

    assert reply == DeployAck(ErrorCode.MALFORMED)
    assert app.session.deploy_counter == 1
