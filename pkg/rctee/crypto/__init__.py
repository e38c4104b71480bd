"""
The crypto module hosts the fixed suite of primitives shared by the TTP, the
simulated device, the SMA and the user client.
"""

from .drbg import Drbg, drbg
from .keys import (
    DIGEST_SIZE,
    KEY_SIZE,
    PUBLIC_KEY_SIZE,
    SIGNATURE_SIZE,
    Certificate,
    DhKeyPair,
    Digest,
    SignKeyPair,
    SymmetricKey,
)
from .primitives import (
    NONCE_SIZE,
    PKE_LABEL,
    SESSION_LABEL,
    TAG_SIZE,
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

__all__ = [
    "Certificate",
    "DhKeyPair",
    "Digest",
    "Drbg",
    "SignKeyPair",
    "SymmetricKey",
    "DIGEST_SIZE",
    "KEY_SIZE",
    "NONCE_SIZE",
    "PUBLIC_KEY_SIZE",
    "PKE_LABEL",
    "SESSION_LABEL",
    "SIGNATURE_SIZE",
    "TAG_SIZE",
    "aead_open",
    "aead_seal",
    "dh_agree",
    "dh_from_sign",
    "dh_keygen",
    "dh_public_from_sign_public",
    "drbg",
    "hash_data",
    "issue_certificate",
    "kdf",
    "pke_open",
    "pke_seal",
    "session_key",
    "sign",
    "sign_keygen",
    "verify",
    "verify_certificate",
]
