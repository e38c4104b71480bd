"""
The simulated FPGA-SoC: staged secure boot, TOS/ROS world separation, the
PL configuration and the Internal Core API syscalls.
"""

import functools
import logging
import struct
from dataclasses import dataclass
from enum import Enum, IntEnum
from threading import RLock
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sklearn.utils import check_random_state

from rctee.crypto import (
    KEY_SIZE,
    NONCE_SIZE,
    SymmetricKey,
    hash_data,
    verify,
)
from rctee.device.kernels import run_kernel
from rctee.device.memory import (
    BusAccess,
    Direction,
    PhysicalMemory,
    SharedMemoryHandle,
    World,
    prot_of,
)
from rctee.errors import ErrorCode, RcteeError
from rctee.image import (
    H_BOOT_SIZE,
    PUF_KERNEL,
    BitstreamContainer,
    BootableImage,
    IpDescriptor,
    MeasurementSet,
    Partition,
    PartitionKind,
    PartitionRecord,
    decode_bitstream,
    open_record,
    seal_partition,
)
from rctee.memory_map import (
    IP_BLOCK_SIZE,
    OCM_MEASUREMENT_SLOT,
    PUF_RESPONSE_ADDRESS,
    PUF_STATUS_ADDRESS,
)
from rctee.puf import Challenge, Response, RoPufModel, instantiate
from rctee.puf.ro_puf import RandomState

logger = logging.getLogger(__name__)

DEVICE_ID_SIZE = 16
_DEVICE_ID_LABEL = b"RCTEE-DI-V1"

# boot stages in execution order; hooks run right after a stage completes
STAGE_PMU_ROM = "pmu_rom"
STAGE_CSU_ROM = "csu_rom"
STAGE_FSBL = "fsbl"
STAGE_PARTITIONS = "partitions_measured"
STAGE_OCM_WRITE = "ocm_written"
STAGE_TEE_BOOT = "tee_boot"
STAGE_ROS_UP = "ros_up"
BOOT_STAGES = (
    STAGE_PMU_ROM,
    STAGE_CSU_ROM,
    STAGE_FSBL,
    STAGE_PARTITIONS,
    STAGE_OCM_WRITE,
    STAGE_TEE_BOOT,
    STAGE_ROS_UP,
)

Hook = Callable[["FpgaSoc"], None]


class Phase(Enum):
    POWERED_OFF = "PoweredOff"
    BOOT_FAILED = "BootFailed"
    RUNNING = "Running"


class MeasurementLocation(Enum):
    IN_OCM = "InOcm"
    IN_SECURE_MEMORY = "InSecureMemory"
    CLEARED = "Cleared"


class IpStatus(IntEnum):
    IDLE = 0
    RUNNING = 1
    DONE = 2
    FAULT = 3


@dataclass(frozen=True)
class IpInvocation:
    """
    Input records and the status and output addresses of one IP call.

    Parameters
    ----------
    records : tuple of (int, bytes)
        (input physical address, data) pairs.
    status_address : int
    output_addresses : tuple of int
    """

    records: Tuple[Tuple[int, bytes], ...]
    status_address: int
    output_addresses: Tuple[int, ...]

    def __post_init__(self) -> None:
        records = tuple((int(address), bytes(data)) for address, data in self.records)
        object.__setattr__(self, "records", records)
        object.__setattr__(self, "output_addresses", tuple(self.output_addresses))

    @property
    def record_count(self) -> int:
        return len(self.records)


def device_id_from_seed(device_seed: bytes) -> bytes:
    """#DI of the device manufactured from ``device_seed``."""
    return hash_data(_DEVICE_ID_LABEL + bytes(device_seed))[:DEVICE_ID_SIZE]


def _serialized(method):
    @functools.wraps(method)
    def wrapper(self, *args, **kwargs):
        with self._lock:
            return method(self, *args, **kwargs)

    return wrapper


class FpgaSoc:
    """
    One simulated device.

    Every public method runs under a per-device re-entrant lock, so concurrent
    callers are serialized. Distinct instances share nothing.

    Parameters
    ----------
    device_seed : bytes
        32-byte manufacturing seed. It fixes #DI and, unless ``puf`` is given, the
        RO-PUF frequencies.
    puf : RoPufModel, default=None
        Replaces the PUF of the seed; used to build a clone that carries the
        genuine identity but not the genuine PUF.
    random_state : int, RandomState instance or None
        Source of PUF noise and of the per-boot random value.
    **puf_params :
        Forwarded to :func:`rctee.puf.instantiate`.

    Attributes
    ----------
    phase : Phase
    boot_failure : ErrorCode or None
    measurement_location : MeasurementLocation
    pcap_direct_access : bool
    stages_reached : list of str
    """

    def __init__(
        self,
        device_seed: bytes,
        puf: Optional[RoPufModel] = None,
        random_state: RandomState = None,
        **puf_params,
    ) -> None:
        self.device_id = device_id_from_seed(device_seed)
        self.puf = puf if puf is not None else instantiate(device_seed, **puf_params)
        self._rng = check_random_state(random_state)
        self._lock = RLock()

        self.memory = PhysicalMemory()
        self._bbram_key: Optional[SymmetricKey] = None
        self._flash: Optional[BootableImage] = None
        self._hooks: Dict[str, List[Hook]] = {}

        self._reset_volatile()

    def _reset_volatile(self) -> None:
        self.phase = Phase.POWERED_OFF
        self.boot_failure: Optional[ErrorCode] = None
        self.stages_reached: List[str] = []
        self.measurement_location = MeasurementLocation.CLEARED
        self._measurements: Optional[MeasurementSet] = None
        self.pcap_direct_access = False
        self.pk_ta: Optional[bytes] = None
        self.pl_config: Optional[BitstreamContainer] = None
        self._pl_raw = b""
        self._output_lengths: Dict[int, int] = {}
        self._sma_artifact: Optional[Tuple[bytes, bytes]] = None
        self._boot_entropy = b""
        self.running_ta: Optional["TaContext"] = None
        self.memory.clear()

    # ------------------------------------------------------------------
    # provisioning and life cycle
    # ------------------------------------------------------------------

    @_serialized
    def program_bbram(self, key: SymmetricKey) -> None:
        self._bbram_key = key

    @_serialized
    def flash(self, image: BootableImage) -> None:
        """Writes a bootable image to the boot medium."""
        if isinstance(image, (bytes, bytearray, memoryview)):
            image = BootableImage.from_bytes(image)
        self._flash = image

    @property
    def flashed_image(self) -> Optional[BootableImage]:
        return self._flash

    @_serialized
    def inject_tamper(self, kind: PartitionKind, offset: int = 0) -> None:
        """Flips one byte of a partition's ciphertext in flash."""
        record = self._require_flash().record(kind)
        ciphertext = bytearray(record.ciphertext)
        ciphertext[offset % len(ciphertext)] ^= 0x01
        self._flash = self._flash.replace(
            PartitionRecord(record.kind, record.nonce, bytes(ciphertext))
        )
        logger.info("tampered %s at offset %d", PartitionKind(kind).name, offset)

    @_serialized
    def set_firmware(self, pcap_direct_access: bool) -> None:
        """
        Swaps the PMU firmware variant in flash: standard firmware keeps PCAP
        open to software, the custom one disables it.
        """
        image = self._require_flash()
        if self._bbram_key is None:
            raise RcteeError(ErrorCode.BAD_STATE, "BBRAM key not programmed")
        current = open_record(image.record(PartitionKind.PMU_FW), self._bbram_key)
        body = current.payload[1:]
        replacement = Partition.pmu_firmware(pcap_direct_access, body)
        nonce = self._rng.bytes(NONCE_SIZE)
        self._flash = image.replace(seal_partition(replacement, self._bbram_key, nonce))
        logger.info(
            "PMU firmware set to %s", "standard" if pcap_direct_access else "custom"
        )

    @_serialized
    def register_hook(self, stage: str, callback: Hook) -> None:
        if stage not in BOOT_STAGES:
            raise RcteeError(ErrorCode.BAD_PARAMS, f"unknown boot stage {stage!r}")
        self._hooks.setdefault(stage, []).append(callback)

    def _require_flash(self) -> BootableImage:
        if self._flash is None:
            raise RcteeError(ErrorCode.BAD_STATE, "no image flashed")
        return self._flash

    def _reach(self, stage: str) -> None:
        self.stages_reached.append(stage)
        logger.debug("boot stage %s", stage)
        for callback in self._hooks.get(stage, []):
            callback(self)

    def _fail(self, code: ErrorCode, detail: str) -> RcteeError:
        self.phase = Phase.BOOT_FAILED
        self.boot_failure = code
        logger.warning("boot failed: %s (%s)", code.name, detail)
        return RcteeError(code, detail)

    @_serialized
    def power_on(self, image: Optional[BootableImage] = None) -> "FpgaSoc":
        """
        Runs the secure and trusted boot chain.

        PMU ROM, CSU ROM and the FSBL decrypt every partition with the BBRAM key;
        the FSBL measures them into the last OCM chunk; the TEE boot copies the
        measurements into TOS memory and zeroes the OCM slot; then the ROS starts.

        Parameters
        ----------
        image : BootableImage, default=None
            Flashed first when given.

        Raises
        ------
        RcteeError
            BOOT_AUTH_FAIL when a partition does not authenticate, MALFORMED_IMAGE
            for a structurally invalid image. The phase becomes BootFailed in both
            cases. BAD_STATE when the device is already running.
        """
        if self.phase is Phase.RUNNING:
            raise RcteeError(ErrorCode.BAD_STATE, "device already running")
        if image is not None:
            self.flash(image)
        self._reset_volatile()

        try:
            flashed = self._require_flash()
        except RcteeError as error:
            raise self._fail(ErrorCode.MALFORMED_IMAGE, error.detail) from None
        self._reach(STAGE_PMU_ROM)

        key = self._bbram_key
        if key is None:
            raise self._fail(ErrorCode.BOOT_AUTH_FAIL, "BBRAM key not programmed")
        self._reach(STAGE_CSU_ROM)

        partitions: Dict[PartitionKind, Partition] = {}
        for record in flashed.records:
            try:
                partitions[record.kind] = open_record(record, key)
            except RcteeError:
                raise self._fail(
                    ErrorCode.BOOT_AUTH_FAIL,
                    f"{record.kind.name} failed to authenticate",
                ) from None
            if record.kind is PartitionKind.FSBL:
                self._reach(STAGE_FSBL)

        measurements = MeasurementSet(
            tuple((kind, hash_data(p.payload)) for kind, p in partitions.items())
        )
        try:
            pcap_direct_access = partitions[PartitionKind.PMU_FW].pcap_direct_access
            pk_ta = partitions[PartitionKind.TEE].pk_ta
            sma_artifact = partitions[PartitionKind.LINUX].sma
            pl_raw = partitions[PartitionKind.BIT].payload
            pl_config = decode_bitstream(pl_raw)
        except RcteeError as error:
            raise self._fail(ErrorCode.MALFORMED_IMAGE, error.detail) from None
        self._reach(STAGE_PARTITIONS)

        self.memory.write(OCM_MEASUREMENT_SLOT, measurements.h_boot())
        self.measurement_location = MeasurementLocation.IN_OCM
        self._reach(STAGE_OCM_WRITE)

        # TEE boot moves the measurements out of OCM
        self._measurements = measurements
        self.memory.zero(OCM_MEASUREMENT_SLOT, H_BOOT_SIZE)
        self.measurement_location = MeasurementLocation.IN_SECURE_MEMORY
        self.pk_ta = pk_ta
        self._boot_entropy = self._rng.bytes(KEY_SIZE)
        self._reach(STAGE_TEE_BOOT)

        self.pcap_direct_access = pcap_direct_access
        self.pl_config = pl_config
        self._pl_raw = pl_raw
        self._sma_artifact = sma_artifact
        self.phase = Phase.RUNNING
        self._reach(STAGE_ROS_UP)

        logger.info("device %s booted", self.device_id.hex())
        return self

    @_serialized
    def power_off(self) -> None:
        self._reset_volatile()
        logger.info("device %s powered off", self.device_id.hex())

    # ------------------------------------------------------------------
    # syscalls
    # ------------------------------------------------------------------

    def _require_running(self) -> None:
        if self.phase is not Phase.RUNNING:
            raise RcteeError(ErrorCode.NOT_RUNNING, f"device is {self.phase.value}")

    def _require_tos(self, world: World, syscall: str) -> None:
        self._require_running()
        if world is not World.TOS:
            logger.warning("%s called from %s", syscall, world.value)
            raise RcteeError(ErrorCode.WORLD_VIOLATION, f"{syscall} is TOS-only")

    @_serialized
    def syscall_get_boot_hash(self, world: World) -> bytes:
        """H_BOOT of the running image, readable from the trusted world only."""
        self._require_tos(world, "syscall_get_boot_hash")
        return self._measurements.h_boot()

    @_serialized
    def syscall_get_hw_puf_response(
        self, world: World, challenge: Challenge
    ) -> Response:
        """
        Evaluates the RO-PUF of the initial hardware design.

        Raises
        ------
        RcteeError
            WORLD_VIOLATION, NOT_RUNNING, PUF_NOT_PRESENT once a user design has
            replaced the initial one, BAD_PARAMS / SAME_INDEX for bad pairs.
        """
        self._require_tos(world, "syscall_get_hw_puf_response")
        if not self.pl_config.has_kernel(PUF_KERNEL):
            raise RcteeError(ErrorCode.PUF_NOT_PRESENT, "the PUF IP was overwritten")
        self._write_status(PUF_STATUS_ADDRESS, IpStatus.RUNNING)
        response = self.puf.evaluate(challenge, self._rng)
        self.memory.write(PUF_RESPONSE_ADDRESS, response.packed())
        self._write_status(PUF_STATUS_ADDRESS, IpStatus.DONE)
        return response

    @_serialized
    def syscall_program_user_hw(self, world: World, bitstream: bytes) -> None:
        """
        Loads a user design through PCAP. A rejected container leaves the PL
        untouched.
        """
        self._require_tos(world, "syscall_program_user_hw")
        container = decode_bitstream(bitstream)

        self.pl_config = container
        self._pl_raw = bytes(bitstream)
        self._output_lengths = {}
        for ip in container.ips:
            self._write_status(ip.status_address, IpStatus.IDLE)
        logger.info("PL programmed with %d IPs", len(container.ips))

    @_serialized
    def pcap_readback(self, world: World) -> bytes:
        """
        Reads the configuration back over PCAP, possible only with the standard PMU
        firmware.
        """
        self._require_running()
        if not self.pcap_direct_access:
            logger.warning("PCAP readback from %s denied", world.value)
            raise RcteeError(ErrorCode.PCAP_DISABLED, "PMU firmware disables PCAP")
        return self._pl_raw

    def _record_end(self, ip: IpDescriptor, address: int) -> int:
        """First address past the room a record at ``address`` may fill."""
        block_end = ip.status_address + IP_BLOCK_SIZE
        bounds = [
            other
            for descriptor in self.pl_config.ips
            for other in descriptor.addresses
            if other > address
        ]
        if address < block_end:
            bounds.append(block_end)
        return min(bounds, default=address + IP_BLOCK_SIZE)

    def _check_record_room(
        self, ip: IpDescriptor, records: Sequence[Tuple[int, bytes]]
    ) -> None:
        for address, data in records:
            if address + len(data) > self._record_end(ip, address):
                raise RcteeError(
                    ErrorCode.ADDR_MISMATCH,
                    f"{len(data)} bytes at {address:#x} run into the next record "
                    f"of IP {ip.kernel}",
                )

    @_serialized
    def syscall_usr_def_ip(
        self, world: World, ip_id: bytes, invocation: IpInvocation
    ) -> Tuple[Tuple[int, bytes], ...]:
        """
        Runs a deployed IP.

        Inputs are written to their addresses, the status word goes RUNNING, the
        kernel bound to the IP computes the outputs, which are written to the
        output addresses before the status becomes DONE. A record may fill its
        address up to the next address wired in the design or the end of the
        IP's block.

        Returns
        -------
        tuple of (output address, data)

        Raises
        ------
        RcteeError
            WORLD_VIOLATION, UNKNOWN_IP, ADDR_MISMATCH when an address is not part
            of the IP's map or a record overruns its room, KERNEL_FAULT.
        """
        self._require_tos(world, "syscall_usr_def_ip")
        ip = self.pl_config.find(bytes(ip_id))

        if (
            invocation.status_address != ip.status_address
            or any(a not in ip.input_addresses for a, _ in invocation.records)
            or any(a not in ip.output_addresses for a in invocation.output_addresses)
        ):
            raise RcteeError(
                ErrorCode.ADDR_MISMATCH, f"invocation does not match IP {ip.kernel}"
            )
        self._check_record_room(ip, invocation.records)

        for address, data in invocation.records:
            self.memory.write(address, data)
        self._write_status(ip.status_address, IpStatus.RUNNING)

        inputs = [data for _, data in invocation.records]
        try:
            outputs = run_kernel(ip.kernel, inputs, len(invocation.output_addresses))
            results = tuple(zip(invocation.output_addresses, outputs))
            self._check_record_room(ip, results)
        except RcteeError:
            self._write_status(ip.status_address, IpStatus.FAULT)
            raise

        for address, data in results:
            self.memory.write(address, data)
            self._output_lengths[address] = len(data)
        self._write_status(ip.status_address, IpStatus.DONE)
        return results

    def _write_status(self, address: int, status: IpStatus) -> None:
        self.memory.write(address, struct.pack(">I", status))

    def ip_status(self, address: int) -> IpStatus:
        return IpStatus(struct.unpack(">I", self.memory.read(address, 4))[0])

    def output_length(self, address: int) -> int:
        """Size of the last record an IP wrote at ``address`` (0 if none)."""
        return self._output_lengths.get(address, 0)

    @_serialized
    def bus_access(self, world: World, access: BusAccess) -> Optional[bytes]:
        """
        Performs a bus transaction issued from ``world``.

        Raises
        ------
        RcteeError
            PROT_VIOLATION when the prot bits do not match the issuing world or a
            NonSecure transaction reaches the secure region, BUS_FAULT for unmapped
            addresses, NOT_RUNNING.
        """
        self._require_running()
        if access.prot is not prot_of(world):
            raise RcteeError(
                ErrorCode.PROT_VIOLATION,
                f"{world.value} cannot drive {access.prot.value}",
            )
        try:
            self.memory.check_access(access)
        except RcteeError as error:
            if error.code is ErrorCode.PROT_VIOLATION:
                logger.warning("%s bus access rejected: %s", world.value, error.detail)
            raise
        if access.direction is Direction.READ:
            return self.memory.read(access.address, access.length)
        self.memory.write(access.address, access.data)
        return None

    def bus_read(self, world: World, address: int, length: int) -> bytes:
        access = BusAccess(address, Direction.READ, prot_of(world), length=length)
        return self.bus_access(world, access)

    def bus_write(self, world: World, address: int, data: bytes) -> None:
        access = BusAccess(address, Direction.WRITE, prot_of(world), data)
        self.bus_access(world, access)

    # ------------------------------------------------------------------
    # REE side
    # ------------------------------------------------------------------

    @_serialized
    def write_shared(self, data: bytes) -> SharedMemoryHandle:
        self._require_running()
        return self.memory.write_shared(data)

    @_serialized
    def ros_sma_artifact(self) -> Tuple[bytes, bytes]:
        """(artifact, signature) of the SMA stored in the ROS file system."""
        self._require_running()
        return self._sma_artifact

    @_serialized
    def ocm_slot(self) -> bytes:
        return self.memory.read(OCM_MEASUREMENT_SLOT, H_BOOT_SIZE)

    # ------------------------------------------------------------------
    # trusted applications
    # ------------------------------------------------------------------

    @_serialized
    def start_ta(self, artifact: bytes, signature: bytes) -> "TaContext":
        """
        Starts a trusted application after checking its signature under PK_TA.

        Raises
        ------
        RcteeError
            TA_AUTH_FAIL when the signature does not verify, NOT_RUNNING.
        """
        self._require_running()
        if not verify(self.pk_ta, artifact, signature):
            logger.warning("refused to start an unsigned trusted application")
            raise RcteeError(ErrorCode.TA_AUTH_FAIL, "TA signature does not verify")
        self.running_ta = TaContext(self, bytes(artifact))
        logger.info("trusted application started")
        return self.running_ta

    def __repr__(self) -> str:
        return f"FpgaSoc(device_id={self.device_id.hex()}, phase={self.phase.value})"


class TaContext:
    """
    Capabilities of a trusted application running on the TOS.

    It is the only holder of World.TOS outside of tests, so every syscall issued
    through it is a trusted-world call.
    """

    world = World.TOS

    def __init__(self, soc: FpgaSoc, artifact: bytes) -> None:
        self._soc = soc
        self.artifact = artifact
        self._secure_copy = b""

    @property
    def device_id(self) -> bytes:
        return self._soc.device_id

    @property
    def lock(self) -> RLock:
        return self._soc._lock

    @property
    def puf_oscillators(self) -> int:
        return self._soc.puf.n_oscillators_

    def boot_entropy(self) -> bytes:
        return self._soc._boot_entropy

    def get_boot_hash(self) -> bytes:
        return self._soc.syscall_get_boot_hash(self.world)

    def get_hw_puf_response(self, challenge: Challenge) -> Response:
        return self._soc.syscall_get_hw_puf_response(self.world, challenge)

    def program_user_hw(self, bitstream: bytes) -> None:
        self._soc.syscall_program_user_hw(self.world, bitstream)

    def usr_def_ip(
        self, ip_id: bytes, invocation: IpInvocation
    ) -> Tuple[Tuple[int, bytes], ...]:
        return self._soc.syscall_usr_def_ip(self.world, ip_id, invocation)

    def copy_from_shared(self, handle: SharedMemoryHandle) -> bytes:
        """Copies a REE buffer into TOS-private memory and returns the copy."""
        with self._soc._lock:
            self._soc._require_running()
            self._secure_copy = self._soc.memory.read_shared(handle)
        return self._secure_copy

    def is_running(self) -> bool:
        return self._soc.phase is Phase.RUNNING and self._soc.running_ta is self

