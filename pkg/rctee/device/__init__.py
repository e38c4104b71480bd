"""
The device module simulates the FPGA-SoC: boot chain, world separation, memory
protection, PL configuration and the syscalls offered to trusted applications.
"""

from .kernels import kernel_names, register_kernel, run_kernel
from .memory import (
    BusAccess,
    Direction,
    PhysicalMemory,
    Prot,
    SharedMemoryHandle,
    World,
    prot_of,
)
from .soc import (
    BOOT_STAGES,
    DEVICE_ID_SIZE,
    FpgaSoc,
    IpInvocation,
    IpStatus,
    MeasurementLocation,
    Phase,
    TaContext,
    device_id_from_seed,
)

__all__ = [
    "BOOT_STAGES",
    "DEVICE_ID_SIZE",
    "BusAccess",
    "Direction",
    "FpgaSoc",
    "IpInvocation",
    "IpStatus",
    "MeasurementLocation",
    "Phase",
    "PhysicalMemory",
    "Prot",
    "SharedMemoryHandle",
    "TaContext",
    "World",
    "device_id_from_seed",
    "kernel_names",
    "prot_of",
    "register_kernel",
    "run_kernel",
]
