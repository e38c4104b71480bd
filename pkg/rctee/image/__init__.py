"""
The image module packages the per-device bootable image, the bitstream container
and the boot measurements, the offline artifacts produced at enrollment.
"""

from .bitstream import (
    IP_ID_SIZE,
    PUF_IP_ID,
    PUF_KERNEL,
    BitstreamContainer,
    IpDescriptor,
    decode_bitstream,
    encode_bitstream,
    initial_design,
    puf_ip,
    validate_container,
)
from .bootable_image import (
    BootableImage,
    PartitionRecord,
    open_record,
    package,
    seal_partition,
    unpack_and_measure,
)
from .measurements import H_BOOT_SIZE, MeasurementSet, golden_measurements, h_boot
from .partitions import CANONICAL_ORDER, Partition, PartitionKind

__all__ = [
    "CANONICAL_ORDER",
    "H_BOOT_SIZE",
    "IP_ID_SIZE",
    "PUF_IP_ID",
    "PUF_KERNEL",
    "BitstreamContainer",
    "BootableImage",
    "IpDescriptor",
    "MeasurementSet",
    "Partition",
    "PartitionKind",
    "PartitionRecord",
    "decode_bitstream",
    "encode_bitstream",
    "golden_measurements",
    "h_boot",
    "initial_design",
    "open_record",
    "package",
    "puf_ip",
    "seal_partition",
    "unpack_and_measure",
    "validate_container",
]
