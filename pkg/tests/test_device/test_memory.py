import pytest

from rctee.device import BusAccess, Direction, PhysicalMemory, Prot, World, prot_of
from rctee.errors import ErrorCode, RcteeError
from rctee.memory_map import SECURE_BASE, SHARED_BASE, SHARED_SIZE


def test_sparse_memory_reads_zero_until_written():
    memory = PhysicalMemory()

    assert memory.read(SHARED_BASE, 4) == bytes(4)
    memory.write(SHARED_BASE + 65534, b"abcd")
    assert memory.read(SHARED_BASE + 65534, 4) == b"abcd"

    memory.clear()
    assert memory.read(SHARED_BASE + 65534, 4) == bytes(4)


def test_prot_of_world():
    assert prot_of(World.TOS) is Prot.SECURE
    assert prot_of(World.ROS) is Prot.NON_SECURE


def test_non_secure_access_to_secure_region():
    memory = PhysicalMemory()
    access = BusAccess(SECURE_BASE, Direction.READ, Prot.NON_SECURE, length=4)

    with pytest.raises(RcteeError) as record:
        memory.check_access(access)
    assert record.value.code is ErrorCode.PROT_VIOLATION

    secure = BusAccess(SECURE_BASE, Direction.READ, Prot.SECURE, length=4)
    assert memory.check_access(secure).secure


def test_shared_memory():
    memory = PhysicalMemory()
    handle = memory.write_shared(b"bitstream")

    assert handle.address == SHARED_BASE
    assert memory.read_shared(handle) == b"bitstream"

    with pytest.raises(RcteeError) as record:
        memory.write_shared(b"")
    assert record.value.code is ErrorCode.MALFORMED

    with pytest.raises(RcteeError) as record:
        memory.write_shared(bytes(SHARED_SIZE + 1))
    assert record.value.code is ErrorCode.SHARED_MEM_OVERFLOW
