import pytest

from rctee.client import (
    IP_BLOCK_SIZE,
    RECORD_STRIDE,
    find_ip,
    ip_id_from_name,
    load_manifest,
    manifest_from_ips,
    parse_manifest,
)
from rctee.crypto import drbg
from rctee.errors import ErrorCode, RcteeError
from rctee.image import decode_bitstream
from rctee.memory_map import NON_SECURE_IP_BASE, SECURE_IP_BASE

MANIFEST = """
[bitstream]
filler_len = 64
seed = 00112233
canary = cafe

[ip adder]
kernel = add32
inputs = 2
outputs = 1

[ip mixer]
kernel = xor
secure = no
inputs = 2

[ip digest]
kernel = sha384
"""


def test_parse_manifest():
    manifest = parse_manifest(MANIFEST)

    assert list(manifest.ips) == ["adder", "mixer", "digest"]
    adder, mixer, digest = manifest.ips.values()

    assert adder.ip_id == ip_id_from_name("adder")
    assert adder.secure and digest.secure and not mixer.secure
    assert adder.status_address == SECURE_IP_BASE
    assert adder.input_addresses == (
        SECURE_IP_BASE + RECORD_STRIDE,
        SECURE_IP_BASE + 2 * RECORD_STRIDE,
    )
    assert adder.output_addresses == (SECURE_IP_BASE + 3 * RECORD_STRIDE,)
    assert digest.status_address == SECURE_IP_BASE + IP_BLOCK_SIZE
    assert mixer.status_address == NON_SECURE_IP_BASE


def test_filler():
    manifest = parse_manifest(MANIFEST)
    filler = manifest.filler()

    assert len(filler) == 64
    assert filler[:2] == b"\xca\xfe"
    assert filler[2:] == drbg(bytes.fromhex("00112233"))(62)
    assert decode_bitstream(manifest.to_bytes()).filler == filler


def test_explicit_addresses():
    manifest = parse_manifest(
        "[ip sensor]\n"
        "id = 000102030405060708090a0b0c0d0e0f\n"
        "kernel = echo\n"
        "secure = no\n"
        "status = 0x1000\n"
        "input_addresses = 0x1400, 0x1800\n"
        "output_addresses = 0x1c00\n"
    )
    sensor = manifest.ip("sensor")

    assert sensor.ip_id == bytes(range(16))
    assert sensor.addresses == (0x1000, 0x1400, 0x1800, 0x1C00)
    assert manifest.filler() == b""


@pytest.mark.parametrize(
    "text",
    [
        "[ip adder",
        "[bitstream]\nfiller_len = 8\n",
        "[ip adder]\ninputs = 2\n",
        "[ip adder]\nkernel = add32\nsecure = maybe\n",
        "[ip adder]\nkernel = add32\nid = zz\n",
        "[ip adder]\nkernel = add32\nid = 0011\n",
        "[ip adder]\nkernel = add32\ninputs = -1\n",
        "[ip adder]\nkernel = add32\ninputs = two\n",
        "[ip adder]\nkernel = add32\ninputs = 15\n",
        "[ip adder]\nkernel = add32\nstatus = 0x40000000\n",
        "[ip a]\nkernel = echo\nsecure = no\nstatus = 0x10\n"
        "[ip b]\nkernel = echo\nsecure = no\nstatus = 0x10\n",
        "[bitstream]\nfiller_len = 1\ncanary = 0011\n[ip adder]\nkernel = add32\n",
        "[bitstream]\nfiller_len = -4\n[ip adder]\nkernel = add32\n",
    ],
)
def test_invalid_manifests(text):
    with pytest.raises(RcteeError) as record:
        parse_manifest(text)
    assert record.value.code is ErrorCode.MANIFEST_INVALID


def test_load_manifest(tmp_path):
    path = tmp_path / "design.ini"
    path.write_text(MANIFEST)

    assert load_manifest(str(path)).ips == parse_manifest(MANIFEST).ips

    with pytest.raises(RcteeError) as record:
        load_manifest(str(tmp_path / "missing.ini"))
    assert record.value.code is ErrorCode.MANIFEST_INVALID


def test_find_ip():
    manifest = manifest_from_ips([("adder", "add32", True, 2, 1)])
    adder = manifest.ip("adder")

    assert find_ip(manifest.ips, adder.ip_id) is adder
    assert find_ip(manifest.ips, adder.ip_id.hex()) is adder
    assert find_ip(manifest.ips, adder) is adder

    for key in ("subtract", b"\x00" * 16, "00" * 16):
        with pytest.raises(RcteeError) as record:
            find_ip(manifest.ips, key)
        assert record.value.code is ErrorCode.UNKNOWN_IP


def test_manifest_from_ips_places_blocks():
    manifest = manifest_from_ips(
        [
            ("a", "echo", True, 1, 1),
            ("b", "echo", True, 1, 1),
            ("c", "xor", False, 2, 1),
        ]
    )

    bases = [ip.status_address for ip in manifest.ips.values()]
    assert bases == [SECURE_IP_BASE, SECURE_IP_BASE + IP_BLOCK_SIZE, NON_SECURE_IP_BASE]
