from dataclasses import dataclass, field
from typing import Dict

from rctee.client.manifest import IpKey, find_ip
from rctee.crypto import Certificate, Digest, SymmetricKey
from rctee.image import IpDescriptor
from rctee.puf import Challenge


@dataclass
class DeviceSession:
    """
    The user's view of an established session with one device.

    Only :meth:`UserClient.attest` creates sessions, and only after the device
    answered the TTP challenge with the expected digest. ``ips`` holds the IPs of
    the design last deployed in the session.
    """

    device: str
    pk_dev: bytes
    cert_dev: Certificate
    challenge: Challenge
    credential_digest: Digest
    session_key: SymmetricKey
    deploy_counter: int = 0
    invoke_counter: int = 0
    ping_counter: int = 0
    ips: Dict[str, IpDescriptor] = field(default_factory=dict)

    @property
    def device_id(self) -> bytes:
        return self.cert_dev.subject_id

    def ip(self, key: IpKey) -> IpDescriptor:
        return find_ip(self.ips, key)
