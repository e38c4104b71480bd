"""Values computed identically by the SMA, the TTP and the user client."""

import struct
from dataclasses import dataclass
from typing import Sequence, Tuple

from rctee.binary import Reader, Writer
from rctee.crypto import (
    DIGEST_SIZE,
    PUBLIC_KEY_SIZE,
    SIGNATURE_SIZE,
    Digest,
    hash_data,
)
from rctee.device import DEVICE_ID_SIZE, IpInvocation
from rctee.errors import ErrorCode, RcteeError
from rctee.image import IP_ID_SIZE
from rctee.parameter_checks import _check_length
from rctee.puf import Response

SMA_ARTIFACT_MAGIC = b"RCTEE-SMA-V1"

DEPLOY_LABEL = b"DEP"
INVOKE_LABEL = b"INV"
INVOKE_RESPONSE_LABEL = b"INR"
PING_LABEL = b"PNG"
PONG_LABEL = b"PON"

DEPLOY_AAD = b"deploy"
INVOKE_AAD = b"invoke"
PING_AAD = b"ping"

PING_TOKEN_SIZE = 16

ENVELOPE_SIZE = DEVICE_ID_SIZE + DIGEST_SIZE + PUBLIC_KEY_SIZE


def session_nonce(label: bytes, counter: int) -> bytes:
    """3-byte label, 8-byte big-endian counter and one zero byte."""
    if len(label) != 3:
        raise RcteeError(ErrorCode.BAD_PARAMS, "nonce labels are 3 bytes")
    return bytes(label) + struct.pack(">Q", counter) + b"\x00"


def attestation_hash(h_boot: bytes, device_id: bytes) -> Digest:
    """alpha = H(H_BOOT || #DI)."""
    return hash_data(bytes(h_boot) + bytes(device_id))


def credential_digest(response: Response, device_id: bytes) -> Digest:
    """H(R(C) || #DI) with the response bits packed MSB-first."""
    return hash_data(response.packed() + bytes(device_id))


@dataclass(frozen=True)
class SecureBootReport:
    """alpha and its signature delta under SK_DEV."""

    alpha: Digest
    delta: bytes

    def __post_init__(self) -> None:
        _check_length(self.alpha, DIGEST_SIZE, "alpha")
        _check_length(self.delta, SIGNATURE_SIZE, "delta")


@dataclass(frozen=True)
class AttestationEnvelope:
    """Plaintext of epsilon: #DI (16) || alpha (48) || PK_DEV (32)."""

    device_id: bytes
    alpha: Digest
    pk_dev: bytes

    def to_bytes(self) -> bytes:
        return self.device_id + self.alpha + self.pk_dev

    @classmethod
    def from_bytes(cls, data: bytes) -> "AttestationEnvelope":
        if len(data) != ENVELOPE_SIZE:
            raise RcteeError(
                ErrorCode.MALFORMED,
                f"envelope must be {ENVELOPE_SIZE} bytes. Got {len(data)} instead.",
            )
        alpha_end = DEVICE_ID_SIZE + DIGEST_SIZE
        return cls(
            bytes(data[:DEVICE_ID_SIZE]),
            bytes(data[DEVICE_ID_SIZE:alpha_end]),
            bytes(data[alpha_end:]),
        )


def build_sma_artifact(pk_ttp: bytes, body: bytes = b"") -> bytes:
    """The SMA binary: magic, the TTP public key it trusts, then its code."""
    return SMA_ARTIFACT_MAGIC + _check_length(pk_ttp, PUBLIC_KEY_SIZE, "pk_ttp") + body


def sma_artifact_ttp_key(artifact: bytes) -> bytes:
    """PK_TTP embedded in an SMA artifact."""
    header = len(SMA_ARTIFACT_MAGIC)
    if (
        artifact[:header] != SMA_ARTIFACT_MAGIC
        or len(artifact) < header + PUBLIC_KEY_SIZE
    ):
        raise RcteeError(ErrorCode.MALFORMED, "not an SMA artifact")
    return bytes(artifact[header : header + PUBLIC_KEY_SIZE])


# ---------------------------------------------------------------------------
# sealed invoke payloads
# ---------------------------------------------------------------------------


def encode_invoke_request(ip_id: bytes, invocation: IpInvocation) -> bytes:
    writer = Writer().raw(_check_length(ip_id, IP_ID_SIZE, "ip_id"))
    writer.u16(invocation.record_count)
    for address, data in invocation.records:
        writer.u64(address).bulk_bytes(data)
    writer.u64(invocation.status_address)
    writer.u64_list(list(invocation.output_addresses))
    return writer.getvalue()


def decode_invoke_request(data: bytes) -> Tuple[bytes, IpInvocation]:
    reader = Reader(data)
    ip_id = reader.take(IP_ID_SIZE)
    records = tuple((reader.u64(), reader.bulk_bytes()) for _ in range(reader.u16()))
    status_address = reader.u64()
    outputs = tuple(reader.u64_list())
    reader.finish()
    return ip_id, IpInvocation(records, status_address, outputs)


def encode_invoke_response(
    status: ErrorCode, records: Sequence[Tuple[int, bytes]] = ()
) -> bytes:
    writer = Writer().u16(status).u16(len(records))
    for address, data in records:
        writer.u64(address).bulk_bytes(data)
    return writer.getvalue()


def decode_invoke_response(data: bytes) -> Tuple[int, Tuple[Tuple[int, bytes], ...]]:
    reader = Reader(data)
    status = reader.u16()
    records = tuple((reader.u64(), reader.bulk_bytes()) for _ in range(reader.u16()))
    reader.finish()
    return status, records
