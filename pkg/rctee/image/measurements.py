from dataclasses import dataclass
from typing import Sequence, Tuple

from rctee.crypto import DIGEST_SIZE, Digest, hash_data
from rctee.errors import ErrorCode, RcteeError
from rctee.image.partitions import CANONICAL_ORDER, Partition, PartitionKind

H_BOOT_SIZE = DIGEST_SIZE * len(CANONICAL_ORDER)


@dataclass(frozen=True)
class MeasurementSet:
    """
    SHA3-384 digest of every boot partition in canonical order.

    H_BOOT is the concatenation of the seven digests (336 bytes), which keeps the
    per-partition attribution available to the verifier.
    """

    entries: Tuple[Tuple[PartitionKind, Digest], ...]

    def __post_init__(self) -> None:
        kinds = tuple(kind for kind, _ in self.entries)
        if kinds != CANONICAL_ORDER:
            raise RcteeError(
                ErrorCode.MALFORMED,
                "measurements must list the seven partitions in canonical order",
            )
        if any(len(digest) != DIGEST_SIZE for _, digest in self.entries):
            raise RcteeError(ErrorCode.MALFORMED, "every measurement is 48 bytes")

    def digest(self, kind: PartitionKind) -> Digest:
        return dict(self.entries)[PartitionKind(kind)]

    def h_boot(self) -> bytes:
        return b"".join(digest for _, digest in self.entries)

    @classmethod
    def from_h_boot(cls, value: bytes) -> "MeasurementSet":
        if len(value) != H_BOOT_SIZE:
            raise RcteeError(
                ErrorCode.MALFORMED,
                f"H_BOOT must be {H_BOOT_SIZE} bytes. Got {len(value)} instead.",
            )
        digests = [
            value[k : k + DIGEST_SIZE] for k in range(0, H_BOOT_SIZE, DIGEST_SIZE)
        ]
        return cls(tuple(zip(CANONICAL_ORDER, digests)))

    def differing(self, other: "MeasurementSet") -> Tuple[PartitionKind, ...]:
        """Partitions whose digests differ between the two sets."""
        return tuple(
            kind
            for (kind, mine), (_, theirs) in zip(self.entries, other.entries)
            if mine != theirs
        )


def golden_measurements(partitions: Sequence[Partition]) -> MeasurementSet:
    """The verifier's reference: hash of every plaintext payload, canonical order."""
    by_kind = {p.kind: p for p in partitions}
    missing = [k.name for k in CANONICAL_ORDER if k not in by_kind]
    if missing:
        raise RcteeError(ErrorCode.MISSING_PARTITION, f"missing {', '.join(missing)}")
    return MeasurementSet(
        tuple((kind, hash_data(by_kind[kind].payload)) for kind in CANONICAL_ORDER)
    )


def h_boot(measurements: MeasurementSet) -> bytes:
    return measurements.h_boot()
