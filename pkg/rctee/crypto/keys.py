"""Key and certificate containers used by all parties."""

import struct
from dataclasses import dataclass, field

from rctee.errors import ErrorCode, RcteeError
from rctee.parameter_checks import _check_length

DIGEST_SIZE = 48
KEY_SIZE = 32
PUBLIC_KEY_SIZE = 32
SIGNATURE_SIZE = 64

# H(.) values are plain 48-byte strings
Digest = bytes


@dataclass(frozen=True)
class SymmetricKey:
    """A 256-bit AEAD key and the label it was derived for (BBRAM key, SessKey)."""

    key: bytes = field(repr=False)
    label: bytes = b""

    def __post_init__(self) -> None:
        object.__setattr__(self, "key", _check_length(self.key, KEY_SIZE, "key"))


@dataclass(frozen=True)
class SignKeyPair:
    """Ed25519 signing pair. ``secret`` is the 32-byte seed, ``public`` the point."""

    secret: bytes = field(repr=False)
    public: bytes

    def __post_init__(self) -> None:
        _check_length(self.secret, KEY_SIZE, "secret")
        _check_length(self.public, PUBLIC_KEY_SIZE, "public")


@dataclass(frozen=True)
class DhKeyPair:
    """X25519 key-agreement pair."""

    secret: bytes = field(repr=False)
    public: bytes

    def __post_init__(self) -> None:
        _check_length(self.secret, KEY_SIZE, "secret")
        _check_length(self.public, PUBLIC_KEY_SIZE, "public")


@dataclass(frozen=True)
class Certificate:
    """
    A TTP-issued binding of a subject identifier to a public key.

    The issuer signature covers ``subject_id || subject_public``. Ca(PK_USER) binds
    #UID to PK_USER and Ca(PK_DEV) binds #DI to PK_DEV.

    Parameters
    ----------
    subject_id : bytes
        #UID for users, #DI for devices.
    subject_public : bytes
        The 32-byte public key being certified.
    signature : bytes
        64-byte Ed25519 signature of the issuer.
    """

    subject_id: bytes
    subject_public: bytes
    signature: bytes

    def __post_init__(self) -> None:
        if len(self.subject_id) > 0xFFFF:
            raise RcteeError(ErrorCode.MALFORMED, "certificate subject id too long")
        _check_length(self.subject_public, PUBLIC_KEY_SIZE, "subject_public")
        _check_length(self.signature, SIGNATURE_SIZE, "signature")

    def signed_bytes(self) -> bytes:
        return self.subject_id + self.subject_public

    def to_bytes(self) -> bytes:
        return (
            struct.pack(">H", len(self.subject_id))
            + self.subject_id
            + self.subject_public
            + self.signature
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "Certificate":
        if len(data) < 2:
            raise RcteeError(ErrorCode.MALFORMED, "certificate truncated")
        (id_len,) = struct.unpack_from(">H", data, 0)
        expected = 2 + id_len + PUBLIC_KEY_SIZE + SIGNATURE_SIZE
        if len(data) != expected:
            raise RcteeError(
                ErrorCode.MALFORMED,
                f"certificate must be {expected} bytes. Got {len(data)} instead.",
            )
        subject_id = bytes(data[2 : 2 + id_len])
        offset = 2 + id_len
        public = bytes(data[offset : offset + PUBLIC_KEY_SIZE])
        signature = bytes(data[offset + PUBLIC_KEY_SIZE :])
        return cls(subject_id, public, signature)
