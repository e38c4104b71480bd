from dataclasses import dataclass

from rctee.crypto import (
    Certificate,
    DhKeyPair,
    SignKeyPair,
    dh_from_sign,
    verify_certificate,
)
from rctee.errors import ErrorCode, RcteeError


@dataclass(frozen=True)
class UserIdentity:
    """
    A user enrolled at the TTP.

    One key pair serves both for signatures (SK_USER) and for the session key
    agreement, see :attr:`dh_keys`.

    Raises
    ------
    RcteeError
        CERT_INVALID when ``cert`` does not verify under ``pk_ttp`` or does not
        certify ``keys.public``.
    """

    uid: bytes
    keys: SignKeyPair
    cert: Certificate
    pk_ttp: bytes

    def __post_init__(self) -> None:
        if (
            self.cert.subject_public != self.keys.public
            or self.cert.subject_id != self.uid
            or not verify_certificate(self.cert, self.pk_ttp)
        ):
            raise RcteeError(
                ErrorCode.CERT_INVALID, "Ca(PK_USER) does not match the identity"
            )

    @property
    def public_key(self) -> bytes:
        return self.keys.public

    @property
    def dh_keys(self) -> DhKeyPair:
        return dh_from_sign(self.keys)
