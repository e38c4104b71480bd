import pytest

from rctee.crypto import sign_keygen, verify_certificate
from rctee.errors import ErrorCode, RcteeError
from rctee.ttp import TtpDatabase, TtpServer
from rctee.wire import (
    FrameConnection,
    Ping,
    TtpReject,
    TtpVerifyRequest,
    TtpVerifyResponse,
    UserEnrollRequest,
    UserEnrollResponse,
)


def test_enroll_user_message(ttp, tmp_path):
    path = str(tmp_path / "ttp.db")
    server = TtpServer(ttp, database_path=path)
    public = sign_keygen(b"\x0b" * 32).public

    (reply,) = server.handle(UserEnrollRequest(public), {})

    assert isinstance(reply, UserEnrollResponse)
    assert reply.ttp_public == ttp.public_key
    assert verify_certificate(reply.cert, ttp.public_key)
    assert TtpDatabase.load(path).user(reply.uid).pk_user == public


def test_verify_message(ttp, enrollment, make_report):
    server = TtpServer(ttp)

    (reply,) = server.handle(TtpVerifyRequest(*make_report()), {})

    assert isinstance(reply, TtpVerifyResponse)
    assert reply.challenge == enrollment.record.crps.entry(0)[0]


def test_failures_become_rejections(ttp, enrollment, make_report):
    server = TtpServer(ttp)
    delta, _ = make_report()

    assert server.handle(TtpVerifyRequest(delta, b"\x00" * 80), {}) == [
        TtpReject(ErrorCode.DECRYPT_FAIL)
    ]
    assert server.handle(UserEnrollRequest(b"\x00"), {}) == [
        TtpReject(ErrorCode.BAD_KEY)
    ]


def test_session_traffic_is_refused(ttp):
    with pytest.raises(RcteeError) as record:
        TtpServer(ttp).handle(Ping(b"\x00" * 32), {})
    assert record.value.code is ErrorCode.UNKNOWN_TYPE


def test_serve_on_loopback(ttp):
    server = TtpServer(ttp).serve(("127.0.0.1", 0))
    try:
        with FrameConnection.connect(server.address, timeout=5) as connection:
            public = sign_keygen(b"\x0c" * 32).public
            reply = connection.request(UserEnrollRequest(public))
            assert reply.cert.subject_public == public

            rejected = connection.request(Ping(b""))
            assert rejected.code == ErrorCode.UNKNOWN_TYPE
    finally:
        server.stop()
