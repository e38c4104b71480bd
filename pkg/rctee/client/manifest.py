"""
Plain-text design manifests.

A manifest is an INI file with one optional ``[bitstream]`` section and one
``[ip NAME]`` section per IP::

    [bitstream]
    filler_len = 4096
    seed = 00112233
    canary = <64 hex digits>

    [ip adder]
    kernel = add32
    secure = yes
    inputs = 2
    outputs = 1

An IP may give ``id`` (32 hex digits) and explicit ``status``,
``input_addresses`` and ``output_addresses``; otherwise its id is derived from
its name and its addresses are handed out in fixed-size blocks, from
``SECURE_IP_BASE`` for secure IPs and ``NON_SECURE_IP_BASE`` for the others.
Each record then holds up to ``RECORD_STRIDE`` bytes; the device rejects
longer ones with ADDR_MISMATCH.
"""

import configparser
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

from rctee.crypto import drbg, hash_data
from rctee.errors import ErrorCode, RcteeError
from rctee.image import IP_ID_SIZE, BitstreamContainer, IpDescriptor
from rctee.memory_map import IP_BLOCK_SIZE, NON_SECURE_IP_BASE, SECURE_IP_BASE

IP_SECTION_PREFIX = "ip "
RECORD_STRIDE = 0x400
MAX_RECORDS_PER_IP = IP_BLOCK_SIZE // RECORD_STRIDE - 1


def _invalid(detail: str) -> RcteeError:
    return RcteeError(ErrorCode.MANIFEST_INVALID, detail)


def ip_id_from_name(name: str) -> bytes:
    return hash_data(b"RCTEE-IP-V1" + name.encode("utf-8"))[:IP_ID_SIZE]


# an IP is named by its manifest name, its 16-byte id, its hex id or its descriptor
IpKey = Union[str, bytes, IpDescriptor]


def find_ip(ips: Mapping[str, IpDescriptor], key: IpKey) -> IpDescriptor:
    """
    Raises
    ------
    RcteeError
        UNKNOWN_IP when no IP of ``ips`` matches ``key``.
    """
    if isinstance(key, IpDescriptor):
        key = key.ip_id
    if isinstance(key, str):
        if key in ips:
            return ips[key]
        try:
            key = bytes.fromhex(key)
        except ValueError:
            raise RcteeError(ErrorCode.UNKNOWN_IP, f"no IP named {key!r}") from None
    for descriptor in ips.values():
        if descriptor.ip_id == key:
            return descriptor
    raise RcteeError(ErrorCode.UNKNOWN_IP, f"IP {bytes(key).hex()} is not deployed")


def block_addresses(
    base: int, n_inputs: int, n_outputs: int
) -> Tuple[int, Tuple[int, ...], Tuple[int, ...]]:
    """Status, input and output addresses of an IP placed at ``base``."""
    if n_inputs + n_outputs > MAX_RECORDS_PER_IP:
        raise _invalid(
            f"an IP block holds at most {MAX_RECORDS_PER_IP} records. "
            f"Got {n_inputs + n_outputs} instead."
        )
    records = [base + RECORD_STRIDE * (k + 1) for k in range(n_inputs + n_outputs)]
    return base, tuple(records[:n_inputs]), tuple(records[n_inputs:])


@dataclass(frozen=True)
class DesignManifest:
    """
    The IPs of a user design and how its bitstream filler is generated.

    Parameters
    ----------
    ips : dict
        IP name to descriptor, in declaration order.
    filler_len : int, default=0
    seed : bytes, default=None
        DRBG seed of the filler; zeros when None.
    canary : bytes, default=b""
        Written at the start of the filler. Lets a wiretap check that the
        plaintext bitstream never travels.
    """

    ips: Dict[str, IpDescriptor]
    filler_len: int = 0
    seed: Optional[bytes] = None
    canary: bytes = field(default=b"", repr=False)

    def __post_init__(self) -> None:
        if len(self.canary) > self.filler_len:
            raise _invalid("the canary does not fit in the filler")
        try:
            BitstreamContainer(tuple(self.ips.values()))
        except RcteeError as error:
            raise _invalid(f"{error.code.name}: {error.detail}") from None

    def ip(self, key: IpKey) -> IpDescriptor:
        return find_ip(self.ips, key)

    def filler(self) -> bytes:
        body_len = self.filler_len - len(self.canary)
        body = drbg(self.seed)(body_len) if self.seed else bytes(body_len)
        return self.canary + body

    def design(self) -> BitstreamContainer:
        return BitstreamContainer(tuple(self.ips.values()), self.filler())

    def to_bytes(self) -> bytes:
        """The plaintext RCTB bitstream Bin."""
        return self.design().to_bytes()


def _hex(value: str, what: str) -> bytes:
    try:
        return bytes.fromhex(value.strip())
    except ValueError:
        raise _invalid(f"{what} is not hex: {value!r}") from None


def _int(value: str, what: str) -> int:
    try:
        return int(value.strip(), 0)
    except ValueError:
        raise _invalid(f"{what} is not an integer: {value!r}") from None


def _int_list(value: str, what: str) -> Tuple[int, ...]:
    return tuple(_int(item, what) for item in value.replace(",", " ").split())


def _parse_ip(
    name: str, section: configparser.SectionProxy, next_base: Dict[bool, int]
) -> IpDescriptor:
    kernel = section.get("kernel", "").strip()
    if not kernel:
        raise _invalid(f"IP {name} has no kernel")
    try:
        secure = section.getboolean("secure", fallback=True)
    except ValueError:
        raise _invalid(f"IP {name}: secure must be yes or no") from None
    ip_id = _hex(section["id"], "id") if "id" in section else ip_id_from_name(name)
    if len(ip_id) != IP_ID_SIZE:
        raise _invalid(f"IP {name}: id must be {IP_ID_SIZE} bytes")

    if "status" in section:
        status = _int(section["status"], "status")
        inputs = _int_list(section.get("input_addresses", ""), "input_addresses")
        outputs = _int_list(section.get("output_addresses", ""), "output_addresses")
    else:
        n_inputs = _int(section.get("inputs", "1"), "inputs")
        n_outputs = _int(section.get("outputs", "1"), "outputs")
        if n_inputs < 0 or n_outputs < 0:
            raise _invalid(f"IP {name}: record counts must be >= 0")
        status, inputs, outputs = block_addresses(
            next_base[secure], n_inputs, n_outputs
        )
        next_base[secure] += IP_BLOCK_SIZE

    try:
        return IpDescriptor(ip_id, kernel, secure, status, inputs, outputs)
    except RcteeError as error:
        raise _invalid(f"IP {name}: {error.detail}") from None


def parse_manifest(text: str) -> DesignManifest:
    """
    Parses manifest text.

    Raises
    ------
    RcteeError
        MANIFEST_INVALID for syntax errors, missing kernels, bad values and
        designs breaking the address rules (for instance a secure IP with an
        address outside the secure region).
    """
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as error:
        raise _invalid(str(error)) from None

    next_base = {True: SECURE_IP_BASE, False: NON_SECURE_IP_BASE}
    ips: Dict[str, IpDescriptor] = {}
    for section_name in parser.sections():
        if not section_name.startswith(IP_SECTION_PREFIX):
            continue
        name = section_name[len(IP_SECTION_PREFIX) :].strip()
        ips[name] = _parse_ip(name, parser[section_name], next_base)
    if not ips:
        raise _invalid("the manifest declares no IP")

    bitstream = parser["bitstream"] if parser.has_section("bitstream") else {}
    filler_len = _int(bitstream.get("filler_len", "0"), "filler_len")
    if filler_len < 0:
        raise _invalid("filler_len must be >= 0")
    seed = _hex(bitstream["seed"], "seed") if "seed" in bitstream else None
    canary = _hex(bitstream.get("canary", ""), "canary")
    return DesignManifest(ips, filler_len, seed or None, canary)


def load_manifest(path: str) -> DesignManifest:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as error:
        raise _invalid(f"cannot read {path}: {error}") from None
    return parse_manifest(text)


def manifest_from_ips(
    ips: Sequence[Tuple[str, str, bool, int, int]],
    filler_len: int = 0,
    seed: Optional[bytes] = None,
    canary: bytes = b"",
) -> DesignManifest:
    """
    Builds a manifest in code from ``(name, kernel, secure, inputs, outputs)``
    tuples with automatic addresses.
    """
    next_base = {True: SECURE_IP_BASE, False: NON_SECURE_IP_BASE}
    descriptors: Dict[str, IpDescriptor] = {}
    for name, kernel, secure, n_inputs, n_outputs in ips:
        status, inputs, outputs = block_addresses(
            next_base[secure], n_inputs, n_outputs
        )
        next_base[secure] += IP_BLOCK_SIZE
        try:
            descriptors[name] = IpDescriptor(
                ip_id_from_name(name), kernel, secure, status, inputs, outputs
            )
        except RcteeError as error:
            raise _invalid(f"IP {name}: {error.detail}") from None
    return DesignManifest(descriptors, filler_len, seed, canary)
