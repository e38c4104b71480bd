"""
The "RCTB" bitstream container: a simulation stand-in for PL configuration data.

A container lists the IPs of a hardware design together with their physical
address maps, followed by opaque filler bytes that stand for the configuration
frames.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

from rctee.binary import Reader, Writer
from rctee.errors import ErrorCode, RcteeError
from rctee.memory_map import (
    PUF_CHALLENGE_ADDRESS,
    PUF_RESPONSE_ADDRESS,
    PUF_STATUS_ADDRESS,
    in_secure_region,
)
from rctee.parameter_checks import _check_length, _check_positive_int

BITSTREAM_MAGIC = b"RCTB"
BITSTREAM_VERSION = 1
IP_ID_SIZE = 16

PUF_KERNEL = "ro_puf"
PUF_IP_ID = b"RCTEE-RO-PUF-IP\x00"


@dataclass(frozen=True)
class IpDescriptor:
    """
    An IP of the design and the addresses it is wired to.

    Parameters
    ----------
    ip_id : bytes
        16-byte identifier.
    kernel : str
        Name of the function the IP computes.
    secure : bool
        Secure IPs are mapped in the reserved secure region and reachable only with
        Secure bus transactions.
    status_address : int
        Execution-state word.
    input_addresses, output_addresses : tuple of int
    """

    ip_id: bytes
    kernel: str
    secure: bool
    status_address: int
    input_addresses: Tuple[int, ...] = ()
    output_addresses: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        ip_id = _check_length(self.ip_id, IP_ID_SIZE, "ip_id")
        object.__setattr__(self, "ip_id", ip_id)
        object.__setattr__(self, "input_addresses", tuple(self.input_addresses))
        object.__setattr__(self, "output_addresses", tuple(self.output_addresses))
        if not self.kernel:
            raise RcteeError(ErrorCode.MALFORMED, "an IP needs a kernel name")

    @property
    def addresses(self) -> Tuple[int, ...]:
        return (self.status_address,) + self.input_addresses + self.output_addresses


@dataclass(frozen=True)
class BitstreamContainer:
    ips: Tuple[IpDescriptor, ...]
    filler: bytes = field(default=b"", repr=False)
    version: int = BITSTREAM_VERSION

    def __post_init__(self) -> None:
        object.__setattr__(self, "ips", tuple(self.ips))
        validate_container(self)

    def find(self, ip_id: bytes) -> IpDescriptor:
        for ip in self.ips:
            if ip.ip_id == ip_id:
                return ip
        raise RcteeError(ErrorCode.UNKNOWN_IP, f"IP {bytes(ip_id).hex()} not deployed")

    def has_kernel(self, kernel: str) -> bool:
        return any(ip.kernel == kernel for ip in self.ips)

    def to_bytes(self) -> bytes:
        writer = Writer().raw(BITSTREAM_MAGIC).u16(self.version).u16(len(self.ips))
        for ip in self.ips:
            writer.raw(ip.ip_id).short_bytes(ip.kernel.encode("utf-8"))
            writer.u8(1 if ip.secure else 0).u64(ip.status_address)
            writer.u64_list(list(ip.input_addresses))
            writer.u64_list(list(ip.output_addresses))
        return writer.bulk_bytes(self.filler).getvalue()


def validate_container(container: BitstreamContainer) -> None:
    """
    Checks the address invariants of a design.

    Raises
    ------
    RcteeError
        MALFORMED without IPs or with repeated IP ids, ADDR_OUT_OF_REGION when a
        secure IP has an address outside the secure region or a non-secure IP one
        inside it, ADDR_COLLISION when two addresses coincide.
    """
    if not container.ips:
        raise RcteeError(ErrorCode.MALFORMED, "a bitstream holds at least one IP")

    ids = [ip.ip_id for ip in container.ips]
    if len(set(ids)) != len(ids):
        raise RcteeError(ErrorCode.MALFORMED, "IP ids must be distinct")

    seen = set()
    for ip in container.ips:
        for address in ip.addresses:
            if in_secure_region(address) != ip.secure:
                where = "outside" if ip.secure else "inside"
                raise RcteeError(
                    ErrorCode.ADDR_OUT_OF_REGION,
                    f"IP {ip.kernel} has address {address:#x} "
                    f"{where} the secure region",
                )
            if address in seen:
                raise RcteeError(
                    ErrorCode.ADDR_COLLISION, f"address {address:#x} used twice"
                )
            seen.add(address)


def decode_bitstream(data: bytes) -> BitstreamContainer:
    """Parses and validates an RCTB container. Errors as :func:`validate_container`."""
    reader = Reader(data)
    if reader.take(len(BITSTREAM_MAGIC)) != BITSTREAM_MAGIC:
        raise RcteeError(ErrorCode.MALFORMED, "not an RCTB bitstream")
    version = reader.u16()
    if version != BITSTREAM_VERSION:
        raise RcteeError(
            ErrorCode.MALFORMED, f"unsupported bitstream version {version}"
        )

    ips = []
    for _ in range(reader.u16()):
        ip_id = reader.take(IP_ID_SIZE)
        try:
            kernel = reader.short_bytes().decode("utf-8")
        except UnicodeDecodeError:
            raise RcteeError(ErrorCode.MALFORMED, "kernel name is not UTF-8") from None
        secure_flag = reader.u8()
        if secure_flag not in (0, 1):
            raise RcteeError(ErrorCode.MALFORMED, "secure flag must be 0 or 1")
        status_address = reader.u64()
        inputs = tuple(reader.u64_list())
        outputs = tuple(reader.u64_list())
        ips.append(
            IpDescriptor(
                ip_id, kernel, bool(secure_flag), status_address, inputs, outputs
            )
        )
    filler = reader.bulk_bytes()
    reader.finish()
    return BitstreamContainer(tuple(ips), filler, version)


def encode_bitstream(
    manifest: Sequence[IpDescriptor],
    filler_len: int = 0,
    drbg: Optional[Callable[[int], bytes]] = None,
) -> bytes:
    """
    Serializes a design.

    Parameters
    ----------
    manifest : sequence of IpDescriptor
    filler_len : int, default=0
        Number of opaque configuration bytes appended after the IP table.
    drbg : callable, default=None
        ``source(n) -> n bytes`` used for the filler; zeros when None.
    """
    filler_len = _check_positive_int(filler_len, "filler_len", minimum=0)
    filler = drbg(filler_len) if drbg is not None else bytes(filler_len)
    return BitstreamContainer(tuple(manifest), filler).to_bytes()


def puf_ip() -> IpDescriptor:
    """The secure RO-PUF IP of the initial hardware design."""
    return IpDescriptor(
        PUF_IP_ID,
        PUF_KERNEL,
        True,
        PUF_STATUS_ADDRESS,
        (PUF_CHALLENGE_ADDRESS,),
        (PUF_RESPONSE_ADDRESS,),
    )


def initial_design(
    filler_len: int = 0, drbg: Optional[Callable[[int], bytes]] = None
) -> bytes:
    """BIT partition content shipped by the TTP: a design holding only the PUF IP."""
    return encode_bitstream([puf_ip()], filler_len, drbg)
