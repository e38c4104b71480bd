import pytest

from rctee.crypto import SymmetricKey, drbg
from rctee.errors import ErrorCode, RcteeError
from rctee.image import (
    CANONICAL_ORDER,
    H_BOOT_SIZE,
    BootableImage,
    MeasurementSet,
    Partition,
    PartitionKind,
    PartitionRecord,
    golden_measurements,
    package,
    unpack_and_measure,
)


def test_package_keeps_canonical_order(partitions, bbram_key):
    shuffled = tuple(reversed(partitions))
    image = package(shuffled, bbram_key, drbg(b"nonces"))

    assert tuple(r.kind for r in image.records) == CANONICAL_ORDER
    assert len({r.nonce for r in image.records}) == 7


def test_missing_and_duplicate_partitions(partitions, bbram_key):
    with pytest.raises(RcteeError) as record:
        package(partitions[:-1], bbram_key, drbg(b"nonces"))
    assert record.value.code is ErrorCode.MISSING_PARTITION

    with pytest.raises(RcteeError) as record:
        package(partitions + partitions[:1], bbram_key, drbg(b"nonces"))
    assert record.value.code is ErrorCode.DUPLICATE_PARTITION


def test_unpack_and_measure_matches_golden(image, partitions, bbram_key):
    opened, measurements = unpack_and_measure(image, bbram_key)

    assert opened == tuple(partitions)
    assert measurements == golden_measurements(partitions)
    assert len(measurements.h_boot()) == H_BOOT_SIZE
    assert MeasurementSet.from_h_boot(measurements.h_boot()) == measurements


def test_serialized_image(image, bbram_key):
    data = image.to_bytes()

    assert data[:4] == b"RCBI"
    assert BootableImage.from_bytes(data) == image
    assert unpack_and_measure(data, bbram_key)[1] == unpack_and_measure(
        image, bbram_key
    )[1]

    with pytest.raises(RcteeError) as record:
        unpack_and_measure(data[:-1], bbram_key)
    assert record.value.code is ErrorCode.MALFORMED

    # an image from a newer format version
    with pytest.raises(RcteeError) as record:
        BootableImage.from_bytes(data[:4] + b"\x00\x02" + data[6:])
    assert record.value.code is ErrorCode.MALFORMED
    assert "version 2" in record.value.detail


@pytest.mark.parametrize("kind", list(PartitionKind))
def test_any_tampered_partition_is_detected(image, bbram_key, kind):
    # test case: one flipped ciphertext byte per partition
    victim = image.record(kind)
    ciphertext = bytes([victim.ciphertext[0] ^ 0x01]) + victim.ciphertext[1:]
    tampered = image.replace(PartitionRecord(kind, victim.nonce, ciphertext))

    with pytest.raises(RcteeError) as record:
        unpack_and_measure(tampered, bbram_key)
    assert record.value.code is ErrorCode.AUTH_FAIL


def test_wrong_bbram_key(image):
    with pytest.raises(RcteeError) as record:
        unpack_and_measure(image, SymmetricKey(b"\x00" * 32))
    assert record.value.code is ErrorCode.AUTH_FAIL


def test_partition_kind_is_authenticated(image, bbram_key):
    # moving a sealed ATF record into the UBOOT slot must not decrypt
    atf = image.record(PartitionKind.ATF)
    moved = image.replace(
        PartitionRecord(PartitionKind.UBOOT, atf.nonce, atf.ciphertext)
    )

    with pytest.raises(RcteeError):
        unpack_and_measure(moved, bbram_key)


def test_measurements_attribute_differences(partitions):
    golden = golden_measurements(partitions)
    changed = list(partitions)
    changed[2] = Partition(PartitionKind.BIT, b"other design")

    assert golden.differing(golden_measurements(changed)) == (PartitionKind.BIT,)
