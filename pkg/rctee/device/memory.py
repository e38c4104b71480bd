"""Physical memory of the simulated SoC and the AXI-style protection check."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

from rctee.errors import ErrorCode, RcteeError
from rctee.memory_map import (
    DDR_BASE,
    DDR_END,
    OCM_BASE,
    OCM_SIZE,
    SECURE_BASE,
    SECURE_END,
    SHARED_BASE,
    SHARED_SIZE,
)

PAGE_SIZE = 64 * 1024


class World(Enum):
    TOS = "TOS"
    ROS = "ROS"


class Prot(Enum):
    SECURE = "Secure"
    NON_SECURE = "NonSecure"


class Direction(Enum):
    READ = "Read"
    WRITE = "Write"


def prot_of(world: World) -> Prot:
    """AxPROT driven by a master running in ``world``."""
    return Prot.SECURE if world is World.TOS else Prot.NON_SECURE


@dataclass(frozen=True)
class BusAccess:
    """
    One bus transaction.

    Parameters
    ----------
    address : int
    direction : Direction
    prot : Prot
        Secure only for transactions issued from the trusted world.
    data : bytes, default=b""
        Payload of a write.
    length : int, default=0
        Number of bytes of a read.
    """

    address: int
    direction: Direction
    prot: Prot
    data: bytes = b""
    length: int = 0

    @property
    def size(self) -> int:
        return len(self.data) if self.direction is Direction.WRITE else self.length


@dataclass(frozen=True)
class Region:
    name: str
    base: int
    end: int
    secure: bool

    def contains(self, address: int, length: int) -> bool:
        return self.base <= address and address + max(length, 1) <= self.end


REGIONS: Tuple[Region, ...] = (
    Region("ddr", DDR_BASE, DDR_END, False),
    Region("secure", SECURE_BASE, SECURE_END, True),
    Region("ocm", OCM_BASE, OCM_BASE + OCM_SIZE, False),
)


@dataclass(frozen=True)
class SharedMemoryHandle:
    """Location of a buffer the REE placed in shared memory."""

    address: int
    length: int


class PhysicalMemory:
    """
    Sparse byte-addressable memory covering DDR, the secure region and OCM.

    Pages are allocated on first write; unwritten bytes read as zero. Accesses
    that leave the mapped regions raise BUS_FAULT.
    """

    def __init__(self) -> None:
        self._pages: Dict[int, bytearray] = {}

    @staticmethod
    def region_of(address: int, length: int) -> Region:
        for region in REGIONS:
            if region.contains(address, length):
                return region
        raise RcteeError(
            ErrorCode.BUS_FAULT, f"{length} bytes at {address:#x} are not mapped"
        )

    def read(self, address: int, length: int) -> bytes:
        self.region_of(address, length)
        out = bytearray(length)
        done = 0
        while done < length:
            page_no, offset = divmod(address + done, PAGE_SIZE)
            chunk = min(length - done, PAGE_SIZE - offset)
            page: Optional[bytearray] = self._pages.get(page_no)
            if page is not None:
                out[done : done + chunk] = page[offset : offset + chunk]
            done += chunk
        return bytes(out)

    def write(self, address: int, data: bytes) -> None:
        self.region_of(address, len(data))
        view = memoryview(bytes(data))
        done = 0
        while done < len(view):
            page_no, offset = divmod(address + done, PAGE_SIZE)
            chunk = min(len(view) - done, PAGE_SIZE - offset)
            page = self._pages.setdefault(page_no, bytearray(PAGE_SIZE))
            page[offset : offset + chunk] = view[done : done + chunk]
            done += chunk

    def zero(self, address: int, length: int) -> None:
        self.write(address, bytes(length))

    def clear(self) -> None:
        """Power loss: every volatile byte returns to zero."""
        self._pages.clear()

    def check_access(self, access: BusAccess) -> Region:
        """
        Applies the TrustZone rule to a transaction.

        Raises
        ------
        RcteeError
            BUS_FAULT for unmapped addresses, PROT_VIOLATION for a NonSecure
            transaction that touches the secure region.
        """
        region = self.region_of(access.address, access.size)
        if region.secure and access.prot is not Prot.SECURE:
            raise RcteeError(
                ErrorCode.PROT_VIOLATION,
                f"NonSecure {access.direction.value.lower()} of {access.address:#x}",
            )
        return region

    def write_shared(self, data: bytes) -> SharedMemoryHandle:
        """
        Places a buffer at the start of the REE/TEE shared region.

        Raises
        ------
        RcteeError
            MALFORMED for an empty buffer, SHARED_MEM_OVERFLOW when it does not fit.
        """
        if len(data) == 0:
            raise RcteeError(ErrorCode.MALFORMED, "empty shared-memory payload")
        if len(data) > SHARED_SIZE:
            raise RcteeError(
                ErrorCode.SHARED_MEM_OVERFLOW,
                f"{len(data)} bytes exceed the {SHARED_SIZE}-byte shared region",
            )
        self.write(SHARED_BASE, data)
        return SharedMemoryHandle(SHARED_BASE, len(data))

    def read_shared(self, handle: SharedMemoryHandle) -> bytes:
        if not (
            SHARED_BASE <= handle.address
            and handle.address + handle.length <= SHARED_BASE + SHARED_SIZE
        ):
            raise RcteeError(ErrorCode.BUS_FAULT, "handle outside shared memory")
        return self.read(handle.address, handle.length)
