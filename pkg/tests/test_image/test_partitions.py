import pytest

from rctee.errors import ErrorCode, RcteeError
from rctee.image import Partition, PartitionKind


def test_firmware_flag():
    assert Partition.pmu_firmware(True).pcap_direct_access
    assert not Partition.pmu_firmware(False, b"body").pcap_direct_access

    with pytest.raises(RcteeError) as record:
        Partition(PartitionKind.PMU_FW, b"").pcap_direct_access
    assert record.value.code is ErrorCode.MALFORMED


def test_tee_and_linux_fields(ta_keys, sma):
    artifact, signature = sma

    assert Partition.tee_os(ta_keys.public, b"os").pk_ta == ta_keys.public
    assert Partition.linux(artifact, signature, b"fs").sma == (artifact, signature)


def test_field_of_the_wrong_kind(ta_keys):
    with pytest.raises(RcteeError) as record:
        Partition.tee_os(ta_keys.public).pcap_direct_access
    assert record.value.code is ErrorCode.BAD_PARAMS
