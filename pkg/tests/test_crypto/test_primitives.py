import hashlib

import pytest

from rctee.crypto import (
    NONCE_SIZE,
    PKE_LABEL,
    SESSION_LABEL,
    TAG_SIZE,
    Certificate,
    SymmetricKey,
    aead_open,
    aead_seal,
    dh_agree,
    dh_from_sign,
    dh_keygen,
    dh_public_from_sign_public,
    hash_data,
    issue_certificate,
    kdf,
    pke_open,
    pke_seal,
    session_key,
    sign,
    sign_keygen,
    verify,
    verify_certificate,
)
from rctee.errors import ErrorCode, RcteeError


@pytest.fixture(scope="module")
def key():
    return SymmetricKey(b"\x07" * 32, b"test")


def test_hash_is_sha3_384():
    assert hash_data(b"abc") == hashlib.sha3_384(b"abc").digest()
    assert len(hash_data(b"")) == 48


def test_aead_seal_and_open(key):
    nonce = bytes(NONCE_SIZE)
    sealed = aead_seal(key, nonce, b"aad", b"secret")

    assert len(sealed) == len(b"secret") + TAG_SIZE
    assert aead_open(key, nonce, b"aad", sealed) == b"secret"


@pytest.mark.parametrize("change", ["ciphertext", "aad", "nonce", "key", "short"])
def test_aead_tampering_is_detected(key, change):
    nonce = bytes(NONCE_SIZE)
    sealed = aead_seal(key, nonce, b"aad", b"secret")
    arguments = {"key": key, "nonce": nonce, "aad": b"aad", "ciphertext": sealed}
    if change == "ciphertext":
        arguments["ciphertext"] = bytes([sealed[0] ^ 1]) + sealed[1:]
    elif change == "aad":
        arguments["aad"] = b"other"
    elif change == "nonce":
        arguments["nonce"] = b"\x01" + nonce[1:]
    elif change == "key":
        arguments["key"] = SymmetricKey(b"\x08" * 32)
    else:
        arguments["ciphertext"] = sealed[: TAG_SIZE - 1]

    with pytest.raises(RcteeError) as record:
        aead_open(**arguments)
    assert record.value.code is ErrorCode.AUTH_FAIL


def test_symmetric_key_length():
    with pytest.raises(RcteeError) as record:
        SymmetricKey(b"short")
    assert record.value.code is ErrorCode.BAD_PARAMS


def test_signatures_are_deterministic():
    keys = sign_keygen(b"\x01" * 32)

    assert sign_keygen(b"\x01" * 32) == keys
    assert sign(keys.secret, b"m") == sign(keys.secret, b"m")
    assert verify(keys.public, b"m", sign(keys.secret, b"m"))
    assert not verify(keys.public, b"other", sign(keys.secret, b"m"))
    assert not verify(keys.public[:-1], b"m", sign(keys.secret, b"m"))
    assert not verify(keys.public, b"m", b"\x00" * 64)


def test_certificates():
    issuer = sign_keygen(b"\x02" * 32)
    subject = sign_keygen(b"\x03" * 32)
    cert = issue_certificate(issuer, b"subject", subject.public)

    assert verify_certificate(cert, issuer.public)
    assert not verify_certificate(cert, subject.public)
    assert Certificate.from_bytes(cert.to_bytes()) == cert

    forged = Certificate(b"other", cert.subject_public, cert.signature)
    assert not verify_certificate(forged, issuer.public)

    with pytest.raises(RcteeError) as record:
        Certificate.from_bytes(cert.to_bytes()[:-1])
    assert record.value.code is ErrorCode.MALFORMED


def test_dh_agreement():
    a, b = dh_keygen(b"\x04" * 32), dh_keygen(b"\x05" * 32)

    assert dh_agree(a.secret, b.public) == dh_agree(b.secret, a.public)

    with pytest.raises(RcteeError) as record:
        dh_agree(a.secret, b"\x00" * 31)
    assert record.value.code is ErrorCode.BAD_POINT

    with pytest.raises(RcteeError) as record:
        dh_agree(a.secret, b"\x00" * 32)
    assert record.value.code is ErrorCode.BAD_POINT


def test_dual_use_keys_agree_with_their_signing_view():
    keys = sign_keygen(b"\x06" * 32)

    assert dh_public_from_sign_public(keys.public) == dh_from_sign(keys).public


def test_session_key_is_symmetric():
    user, device = sign_keygen(b"\x09" * 32), sign_keygen(b"\x0a" * 32)

    user_side = session_key(dh_from_sign(user), device.public)
    device_side = session_key(dh_from_sign(device), user.public)

    assert user_side == device_side
    assert user_side.label == SESSION_LABEL


def test_kdf_depends_on_label():
    shared = b"\x0b" * 32

    assert kdf(shared, SESSION_LABEL).key == hash_data(SESSION_LABEL + shared)[:32]
    assert kdf(shared, SESSION_LABEL).key != kdf(shared, PKE_LABEL).key


def test_pke_seal_and_open():
    recipient = sign_keygen(b"\x0c" * 32)
    envelope = pke_seal(dh_public_from_sign_public(recipient.public), b"payload")

    assert pke_open(dh_from_sign(recipient).secret, envelope) == b"payload"

    for damaged in (
        bytes([envelope[0] ^ 1]) + envelope[1:],
        envelope[:-1] + bytes([envelope[-1] ^ 1]),
        envelope[:20],
    ):
        with pytest.raises(RcteeError) as record:
            pke_open(dh_from_sign(recipient).secret, damaged)
        assert record.value.code is ErrorCode.AUTH_FAIL
