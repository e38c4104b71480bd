"""Builds the seven partitions of a device-specific bootable image."""

from typing import Callable, Optional, Tuple

from rctee.crypto import sign
from rctee.image import Partition, PartitionKind, initial_design
from rctee.protocol import build_sma_artifact

SMA_BODY = b"rctee secure management application"


def signed_sma(
    pk_ttp: bytes, sk_ta: bytes, body: bytes = SMA_BODY
) -> Tuple[bytes, bytes]:
    """(artifact, signature under SK_TA) of the SMA shipped in the ROS."""
    artifact = build_sma_artifact(pk_ttp, body)
    return artifact, sign(sk_ta, artifact)


def build_partitions(
    board_version: bytes,
    pk_ta: bytes,
    sma_artifact: bytes,
    sma_signature: bytes,
    pcap_direct_access: bool = False,
    bitstream: Optional[bytes] = None,
    filler_len: int = 0,
    drbg: Optional[Callable[[int], bytes]] = None,
) -> Tuple[Partition, ...]:
    """
    The partitions the TTP packages for a device.

    Parameters
    ----------
    board_version : bytes
        Recorded in the firmware bodies.
    pk_ta : bytes
        Embedded in the TEE partition.
    sma_artifact, sma_signature : bytes
        Embedded in the LINUX partition.
    pcap_direct_access : bool, default=False
        False selects the custom PMU firmware that disables PCAP.
    bitstream : bytes, default=None
        BIT partition content; the initial design with the PUF IP when None.
    filler_len : int, default=0
        Configuration filler of the initial design.
    drbg : callable, default=None
        Byte source for the filler.
    """
    if bitstream is None:
        bitstream = initial_design(filler_len, drbg)

    def body(name: str) -> bytes:
        return f"rctee {name} ".encode("ascii") + bytes(board_version)

    return (
        Partition(PartitionKind.FSBL, body("fsbl")),
        Partition.pmu_firmware(pcap_direct_access, body("pmufw")),
        Partition(PartitionKind.BIT, bitstream),
        Partition(PartitionKind.ATF, body("atf")),
        Partition.tee_os(pk_ta, body("optee")),
        Partition(PartitionKind.UBOOT, body("u-boot")),
        Partition.linux(sma_artifact, sma_signature, body("linux")),
    )
