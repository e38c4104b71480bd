from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from rctee.crypto import SignKeyPair, SymmetricKey


class SessionState(Enum):
    IDLE = "Idle"
    AWAIT_CHALLENGE = "AwaitChallenge"
    ESTABLISHED = "Established"


@dataclass
class SmaSession:
    """
    The single user session of the SMA.

    ``device_keys`` is the PUF-derived dual-use pair (SK_DEV, PK_DEV); it is
    regenerated for every attestation and never reused.
    """

    state: SessionState = SessionState.IDLE
    device_keys: Optional[SignKeyPair] = None
    session_key: Optional[SymmetricKey] = None
    pk_user: Optional[bytes] = None
    deploy_counter: int = 0
    invoke_counter: int = 0
    ping_counter: int = 0
    trace: List[str] = field(default_factory=list)

    @property
    def pk_dev(self) -> Optional[bytes]:
        return self.device_keys.public if self.device_keys else None
