"""Boot partitions and the three payload layouts the device interprets."""

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Tuple

from rctee.binary import Reader, Writer
from rctee.crypto import PUBLIC_KEY_SIZE, SIGNATURE_SIZE
from rctee.errors import ErrorCode, RcteeError
from rctee.parameter_checks import _check_length


class PartitionKind(IntEnum):
    FSBL = 0x01
    PMU_FW = 0x02
    BIT = 0x03
    ATF = 0x04
    TEE = 0x05
    UBOOT = 0x06
    LINUX = 0x07


CANONICAL_ORDER: Tuple[PartitionKind, ...] = tuple(PartitionKind)

_PCAP_DIRECT = 0x01
_PCAP_DISABLED = 0x00


@dataclass(frozen=True)
class Partition:
    """
    One component of the bootable image.

    Payloads are opaque except for three fields the device needs: the PCAP flag
    of PMU_FW (first payload byte), PK_TA in TEE (first 32 bytes) and the signed
    SMA artifact in LINUX (8-byte length, artifact, 64-byte signature).
    """

    kind: PartitionKind
    payload: bytes = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", PartitionKind(self.kind))
        object.__setattr__(self, "payload", bytes(self.payload))

    @classmethod
    def pmu_firmware(cls, pcap_direct_access: bool, body: bytes = b"") -> "Partition":
        flag = _PCAP_DIRECT if pcap_direct_access else _PCAP_DISABLED
        return cls(PartitionKind.PMU_FW, bytes([flag]) + body)

    @classmethod
    def tee_os(cls, pk_ta: bytes, body: bytes = b"") -> "Partition":
        key = _check_length(pk_ta, PUBLIC_KEY_SIZE, "pk_ta")
        return cls(PartitionKind.TEE, key + body)

    @classmethod
    def linux(
        cls, sma_artifact: bytes, sma_signature: bytes, body: bytes = b""
    ) -> "Partition":
        _check_length(sma_signature, SIGNATURE_SIZE, "sma_signature")
        payload = Writer().bulk_bytes(sma_artifact).raw(sma_signature).raw(body)
        return cls(PartitionKind.LINUX, payload.getvalue())

    def _expect(self, kind: PartitionKind) -> None:
        if self.kind != kind:
            raise RcteeError(
                ErrorCode.BAD_PARAMS, f"{kind.name} field read from a {self.kind.name}"
            )

    @property
    def pcap_direct_access(self) -> bool:
        """True for the standard PMU firmware, False for the PCAP-disabled one."""
        self._expect(PartitionKind.PMU_FW)
        if not self.payload or self.payload[0] not in (_PCAP_DIRECT, _PCAP_DISABLED):
            raise RcteeError(ErrorCode.MALFORMED, "PMU firmware flag missing")
        return self.payload[0] == _PCAP_DIRECT

    @property
    def pk_ta(self) -> bytes:
        self._expect(PartitionKind.TEE)
        if len(self.payload) < PUBLIC_KEY_SIZE:
            raise RcteeError(ErrorCode.MALFORMED, "TEE partition lacks PK_TA")
        return self.payload[:PUBLIC_KEY_SIZE]

    @property
    def sma(self) -> Tuple[bytes, bytes]:
        """(SMA artifact, TA signature) embedded in the ROS file system."""
        self._expect(PartitionKind.LINUX)
        reader = Reader(self.payload)
        artifact = reader.bulk_bytes()
        signature = reader.take(SIGNATURE_SIZE)
        return artifact, signature
