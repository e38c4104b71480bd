import pytest

from rctee.client import ClientStore, UserClient, UserIdentity
from rctee.crypto import issue_certificate, sign_keygen
from rctee.errors import ErrorCode, RcteeError


def test_identity_file(tmp_path, user):
    store = ClientStore(str(tmp_path / "alice"))

    with pytest.raises(RcteeError) as record:
        store.load_identity()
    assert record.value.code is ErrorCode.UNKNOWN_USER

    store.save_identity(user.identity)

    assert store.load_identity() == user.identity


def test_sessions_follow_every_counter(tmp_path, testbed, user, session, manifest):
    store = ClientStore(str(tmp_path))
    client = UserClient(user.identity, store)
    link = testbed.device_link()

    assert store.load_session("board-0") is None

    client.deploy_manifest(link, session, manifest)
    client.invoke(link, session, "mixer", [b"\x01", b"\x02"])
    client.ping(link, session)
    stored = store.load_session("board-0")

    assert stored == session
    counters = stored.deploy_counter, stored.invoke_counter, stored.ping_counter
    assert counters == (1, 1, 1)
    assert stored.ip("adder") == manifest.ip("adder")
    assert store.sessions() == [stored]


def test_session_file_names(tmp_path):
    store = ClientStore(str(tmp_path))

    assert store.session_path("rack 3/slot:1").endswith("rack_3_slot_1.bin")


def test_corrupt_files(tmp_path, user):
    store = ClientStore(str(tmp_path))
    store.save_identity(user.identity)
    with open(store.identity_path, "r+b") as handle:
        handle.write(b"XXXX")

    with pytest.raises(RcteeError) as record:
        store.load_identity()
    assert record.value.code is ErrorCode.MALFORMED


def test_identity_must_match_its_certificate(ttp_keys):
    keys = sign_keygen(b"\x11" * 32)
    other = sign_keygen(b"\x12" * 32)
    cert = issue_certificate(ttp_keys, b"U" * 16, keys.public)

    with pytest.raises(RcteeError) as record:
        UserIdentity(b"U" * 16, other, cert, ttp_keys.public)
    assert record.value.code is ErrorCode.CERT_INVALID

    with pytest.raises(RcteeError) as record:
        UserIdentity(b"U" * 16, keys, cert, other.public)
    assert record.value.code is ErrorCode.CERT_INVALID
