"""The encrypted bootable image ("RCBI") built for one device at enrollment."""

from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

from rctee.binary import Reader, Writer
from rctee.crypto import NONCE_SIZE, SymmetricKey, aead_open, aead_seal, hash_data
from rctee.errors import ErrorCode, RcteeError
from rctee.image.measurements import MeasurementSet
from rctee.image.partitions import CANONICAL_ORDER, Partition, PartitionKind

IMAGE_MAGIC = b"RCBI"
IMAGE_VERSION = 1


@dataclass(frozen=True)
class PartitionRecord:
    """One sealed partition: the kind byte doubles as AEAD associated data."""

    kind: PartitionKind
    nonce: bytes
    ciphertext: bytes

    @property
    def aad(self) -> bytes:
        return bytes([self.kind])


@dataclass(frozen=True)
class BootableImage:
    """
    Seven sealed partition records in canonical order.

    Layout (big-endian): ``"RCBI" || version (2) || per record: kind (1) ||
    nonce (12) || ciphertext length (8) || ciphertext with tag``.
    """

    records: Tuple[PartitionRecord, ...]
    version: int = IMAGE_VERSION

    def __post_init__(self) -> None:
        kinds = tuple(record.kind for record in self.records)
        if kinds != CANONICAL_ORDER:
            raise RcteeError(
                ErrorCode.MALFORMED,
                "an image holds exactly seven partitions in canonical order",
            )

    def record(self, kind: PartitionKind) -> PartitionRecord:
        return self.records[CANONICAL_ORDER.index(PartitionKind(kind))]

    def replace(self, record: PartitionRecord) -> "BootableImage":
        records = list(self.records)
        records[CANONICAL_ORDER.index(record.kind)] = record
        return BootableImage(tuple(records), self.version)

    def to_bytes(self) -> bytes:
        writer = Writer().raw(IMAGE_MAGIC).u16(self.version)
        for record in self.records:
            writer.u8(record.kind).raw(record.nonce).bulk_bytes(record.ciphertext)
        return writer.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "BootableImage":
        reader = Reader(data)
        if reader.take(len(IMAGE_MAGIC)) != IMAGE_MAGIC:
            raise RcteeError(ErrorCode.MALFORMED, "not an RCBI image")
        version = reader.u16()
        if version != IMAGE_VERSION:
            raise RcteeError(
                ErrorCode.MALFORMED, f"unsupported image version {version}"
            )

        records: List[PartitionRecord] = []
        for _ in CANONICAL_ORDER:
            kind_byte = reader.u8()
            try:
                kind = PartitionKind(kind_byte)
            except ValueError:
                raise RcteeError(
                    ErrorCode.MALFORMED, f"unknown partition kind {kind_byte:#04x}"
                ) from None
            nonce = reader.take(NONCE_SIZE)
            records.append(PartitionRecord(kind, nonce, reader.bulk_bytes()))
        reader.finish()
        return cls(tuple(records), version)


def _check_partitions(partitions: Sequence[Partition]) -> List[Partition]:
    by_kind = {}
    for partition in partitions:
        if partition.kind in by_kind:
            raise RcteeError(
                ErrorCode.DUPLICATE_PARTITION, f"two {partition.kind.name} partitions"
            )
        by_kind[partition.kind] = partition
    missing = [kind.name for kind in CANONICAL_ORDER if kind not in by_kind]
    if missing:
        raise RcteeError(
            ErrorCode.MISSING_PARTITION, f"missing partitions: {', '.join(missing)}"
        )
    return [by_kind[kind] for kind in CANONICAL_ORDER]


def seal_partition(
    partition: Partition, bbram_key: SymmetricKey, nonce: bytes
) -> PartitionRecord:
    aad = bytes([partition.kind])
    ciphertext = aead_seal(bbram_key, nonce, aad, partition.payload)
    return PartitionRecord(partition.kind, bytes(nonce), ciphertext)


def open_record(record: PartitionRecord, bbram_key: SymmetricKey) -> Partition:
    """
    Decrypts one partition.

    Raises
    ------
    RcteeError
        AUTH_FAIL when the record was modified or the key is wrong.
    """
    payload = aead_open(bbram_key, record.nonce, record.aad, record.ciphertext)
    return Partition(record.kind, payload)


def package(
    partitions: Sequence[Partition],
    bbram_key: SymmetricKey,
    nonce_source: Callable[[int], bytes],
) -> BootableImage:
    """
    Seals every partition independently under the device BBRAM key.

    Parameters
    ----------
    partitions : sequence of Partition
        Exactly one partition of each kind, in any order.
    bbram_key : SymmetricKey
    nonce_source : callable
        ``source(12) -> 12 bytes``; a fresh nonce is drawn per partition.

    Raises
    ------
    RcteeError
        MISSING_PARTITION or DUPLICATE_PARTITION.
    """
    ordered = _check_partitions(partitions)
    records = tuple(
        seal_partition(partition, bbram_key, nonce_source(NONCE_SIZE))
        for partition in ordered
    )
    return BootableImage(records)


def unpack_and_measure(
    image: BootableImage, bbram_key: SymmetricKey
) -> Tuple[Tuple[Partition, ...], MeasurementSet]:
    """
    Decrypts the seven partitions and hashes each plaintext payload.

    ``image`` may also be the serialized form, in which case truncation or bad
    structure raises MALFORMED before any decryption.

    Raises
    ------
    RcteeError
        AUTH_FAIL on the first partition that does not authenticate, MALFORMED on a
        structurally invalid image.
    """
    if isinstance(image, (bytes, bytearray, memoryview)):
        image = BootableImage.from_bytes(image)
    partitions = tuple(open_record(record, bbram_key) for record in image.records)
    measurements = MeasurementSet(
        tuple((p.kind, hash_data(p.payload)) for p in partitions)
    )
    return partitions, measurements
