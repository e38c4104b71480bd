"""The fixed cryptographic suite: SHA3-384, AES-256-GCM, Ed25519 and X25519.

All functions are pure functions of their inputs (``pke_seal`` draws a fresh
ephemeral key unless one is supplied) and are safe to call from any thread.
"""

import hashlib
import os
from typing import Optional

from cryptography.exceptions import InvalidSignature, InvalidTag
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)
from cryptography.hazmat.primitives.asymmetric.x25519 import (
    X25519PrivateKey,
    X25519PublicKey,
)
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from rctee.crypto.keys import (
    KEY_SIZE,
    PUBLIC_KEY_SIZE,
    Certificate,
    DhKeyPair,
    Digest,
    SignKeyPair,
    SymmetricKey,
)
from rctee.errors import ErrorCode, RcteeError
from rctee.parameter_checks import _check_length

NONCE_SIZE = 12
TAG_SIZE = 16

PKE_LABEL = b"RCTEE-PKE-V1"
SESSION_LABEL = b"RCTEE-SESSION-V1"
_DH_KEYGEN_LABEL = b"RCTEE-DH-V1"

# field prime of Curve25519 / edwards25519
_P = 2 ** 255 - 19

_RAW = serialization.Encoding.Raw
_RAW_PUBLIC = serialization.PublicFormat.Raw
_RAW_PRIVATE = serialization.PrivateFormat.Raw
_NO_ENCRYPTION = serialization.NoEncryption()


def hash_data(data: bytes) -> Digest:
    """SHA3-384 of ``data``: the H(.) used for alpha, H_BOOT and credentials."""
    return hashlib.sha3_384(bytes(data)).digest()


# ---------------------------------------------------------------------------
# AEAD
# ---------------------------------------------------------------------------


def aead_seal(key: SymmetricKey, nonce: bytes, aad: bytes, plaintext: bytes) -> bytes:
    """
    Encrypts and authenticates ``plaintext`` with AES-256-GCM.

    Parameters
    ----------
    key : SymmetricKey
    nonce : bytes
        12 bytes, unique per (key, message).
    aad : bytes
        Additional authenticated data.
    plaintext : bytes

    Returns
    -------
    ciphertext : bytes
        ``len(plaintext) + 16`` bytes, tag appended.
    """
    nonce = _check_length(nonce, NONCE_SIZE, "nonce")
    return AESGCM(key.key).encrypt(nonce, bytes(plaintext), bytes(aad))


def aead_open(key: SymmetricKey, nonce: bytes, aad: bytes, ciphertext: bytes) -> bytes:
    """
    Inverse of :func:`aead_seal`.

    Raises
    ------
    RcteeError
        AUTH_FAIL when the tag does not verify (tampering or wrong key).
    """
    nonce = _check_length(nonce, NONCE_SIZE, "nonce")
    if len(ciphertext) < TAG_SIZE:
        raise RcteeError(ErrorCode.AUTH_FAIL, "ciphertext shorter than the tag")
    try:
        return AESGCM(key.key).decrypt(nonce, bytes(ciphertext), bytes(aad))
    except InvalidTag:
        raise RcteeError(ErrorCode.AUTH_FAIL, "authentication tag mismatch") from None


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------


def sign_keygen(seed: Optional[bytes] = None) -> SignKeyPair:
    """Deterministic Ed25519 pair from a 32-byte seed, random when ``seed`` is None."""
    if seed is None:
        seed = os.urandom(KEY_SIZE)
    seed = _check_length(seed, KEY_SIZE, "seed")
    private = Ed25519PrivateKey.from_private_bytes(seed)
    public = private.public_key().public_bytes(_RAW, _RAW_PUBLIC)
    return SignKeyPair(secret=seed, public=public)


def sign(secret: bytes, message: bytes) -> bytes:
    """Deterministic 64-byte Ed25519 signature."""
    private = Ed25519PrivateKey.from_private_bytes(
        _check_length(secret, KEY_SIZE, "secret")
    )
    return private.sign(bytes(message))


def verify(public: bytes, message: bytes, signature: bytes) -> bool:
    """True iff ``signature`` is a valid signature of ``message`` under ``public``."""
    if len(public) != PUBLIC_KEY_SIZE:
        return False
    try:
        Ed25519PublicKey.from_public_bytes(bytes(public)).verify(
            bytes(signature), bytes(message)
        )
    except (InvalidSignature, ValueError):
        return False
    return True


def issue_certificate(
    issuer: SignKeyPair, subject_id: bytes, subject_public: bytes
) -> Certificate:
    signature = sign(issuer.secret, bytes(subject_id) + bytes(subject_public))
    return Certificate(bytes(subject_id), bytes(subject_public), signature)


def verify_certificate(certificate: Certificate, issuer_public: bytes) -> bool:
    return verify(issuer_public, certificate.signed_bytes(), certificate.signature)


# ---------------------------------------------------------------------------
# Key agreement
# ---------------------------------------------------------------------------


def dh_keygen(seed: bytes) -> DhKeyPair:
    """
    Deterministic X25519 pair.

    The seed is hashed before use so that seeds differing only in bits cleared by
    scalar clamping still give distinct keys.
    """
    seed = _check_length(seed, KEY_SIZE, "seed")
    secret = hash_data(_DH_KEYGEN_LABEL + seed)[:KEY_SIZE]
    private = X25519PrivateKey.from_private_bytes(secret)
    public = private.public_key().public_bytes(_RAW, _RAW_PUBLIC)
    return DhKeyPair(secret=secret, public=public)


def dh_agree(secret: bytes, peer_public: bytes) -> bytes:
    """
    X25519 shared secret.

    Raises
    ------
    RcteeError
        BAD_POINT if the peer encoding is not 32 bytes or is a low-order point.
    """
    if len(peer_public) != PUBLIC_KEY_SIZE:
        raise RcteeError(ErrorCode.BAD_POINT, "peer public key must be 32 bytes")
    private = X25519PrivateKey.from_private_bytes(
        _check_length(secret, KEY_SIZE, "secret")
    )
    try:
        return private.exchange(X25519PublicKey.from_public_bytes(bytes(peer_public)))
    except ValueError:
        raise RcteeError(ErrorCode.BAD_POINT, "invalid peer public key") from None


def dh_public_from_sign_public(public: bytes) -> bytes:
    """
    Maps an Ed25519 public key to the X25519 public key of the same secret.

    u = (1 + y) / (1 - y) mod p, where y is the Edwards y-coordinate.
    """
    if len(public) != PUBLIC_KEY_SIZE:
        raise RcteeError(ErrorCode.BAD_POINT, "public key must be 32 bytes")
    y = int.from_bytes(public, "little") & ((1 << 255) - 1)
    if y >= _P or (1 - y) % _P == 0:
        raise RcteeError(ErrorCode.BAD_POINT, "not a valid edwards25519 encoding")
    u = (1 + y) * pow((1 - y) % _P, _P - 2, _P) % _P
    return u.to_bytes(PUBLIC_KEY_SIZE, "little")


def dh_from_sign(keypair: SignKeyPair) -> DhKeyPair:
    """The key-agreement view of a signing pair (one secret, both roles)."""
    secret = hashlib.sha512(keypair.secret).digest()[:KEY_SIZE]
    public = X25519PrivateKey.from_private_bytes(secret).public_key().public_bytes(
        _RAW, _RAW_PUBLIC
    )
    return DhKeyPair(secret=secret, public=public)


def kdf(shared: bytes, label: bytes) -> SymmetricKey:
    """hash(label || shared) truncated to 32 bytes."""
    digest = hash_data(bytes(label) + bytes(shared))
    return SymmetricKey(digest[:KEY_SIZE], bytes(label))


def session_key(own: DhKeyPair, peer_sign_public: bytes) -> SymmetricKey:
    """kdf(dh_agree(own, peer), "RCTEE-SESSION-V1") for a dual-use peer key."""
    shared = dh_agree(own.secret, dh_public_from_sign_public(peer_sign_public))
    return kdf(shared, SESSION_LABEL)


# ---------------------------------------------------------------------------
# Public-key encryption
# ---------------------------------------------------------------------------


def pke_seal(
    recipient_public: bytes, plaintext: bytes, ephemeral_seed: Optional[bytes] = None
) -> bytes:
    """
    Hybrid X25519 + AES-GCM encryption.

    envelope = ephemeral public (32) || aead_seal(kdf(shared, PKE_LABEL), zero nonce,
    empty aad, plaintext). The zero nonce is safe because the key is fresh for every
    envelope.
    """
    if ephemeral_seed is None:
        ephemeral_seed = os.urandom(KEY_SIZE)
    ephemeral = dh_keygen(ephemeral_seed)
    key = kdf(dh_agree(ephemeral.secret, recipient_public), PKE_LABEL)
    return ephemeral.public + aead_seal(key, bytes(NONCE_SIZE), b"", plaintext)


def pke_open(recipient_secret: bytes, envelope: bytes) -> bytes:
    """
    Inverse of :func:`pke_seal`.

    Raises
    ------
    RcteeError
        AUTH_FAIL on any tampering, including a damaged ephemeral key.
    """
    if len(envelope) < PUBLIC_KEY_SIZE + TAG_SIZE:
        raise RcteeError(ErrorCode.AUTH_FAIL, "envelope truncated")
    try:
        shared = dh_agree(recipient_secret, envelope[:PUBLIC_KEY_SIZE])
    except RcteeError:
        raise RcteeError(ErrorCode.AUTH_FAIL, "envelope key invalid") from None
    key = kdf(shared, PKE_LABEL)
    return aead_open(key, bytes(NONCE_SIZE), b"", envelope[PUBLIC_KEY_SIZE:])
