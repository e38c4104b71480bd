"""
The client module is the user side of the protocol: enrollment, attestation with
PUF-based device authentication, bitstream preparation, deployment and IP
invocation, plus the local identity and session store.
"""

from .identity import UserIdentity
from .manifest import (
    IP_BLOCK_SIZE,
    RECORD_STRIDE,
    DesignManifest,
    IpKey,
    find_ip,
    ip_id_from_name,
    load_manifest,
    manifest_from_ips,
    parse_manifest,
)
from .session import DeviceSession
from .storage import (
    ClientStore,
    decode_identity,
    decode_session,
    encode_identity,
    encode_session,
)
from .user import UserClient, expect_reply

__all__ = [
    "ClientStore",
    "DesignManifest",
    "DeviceSession",
    "IP_BLOCK_SIZE",
    "IpKey",
    "RECORD_STRIDE",
    "UserClient",
    "UserIdentity",
    "decode_identity",
    "decode_session",
    "encode_identity",
    "encode_session",
    "expect_reply",
    "find_ip",
    "ip_id_from_name",
    "load_manifest",
    "manifest_from_ips",
    "parse_manifest",
]
