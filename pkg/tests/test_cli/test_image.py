from rctee.cli.common import EXIT_AUTH_FAILURE, EXIT_OK, EXIT_REJECTED
from rctee.cli.image import main
from rctee.client import load_manifest
from rctee.image import unpack_and_measure

MANIFEST = """
[bitstream]
filler_len = 64
seed = 00112233

[ip adder]
kernel = add32
inputs = 2
outputs = 1
"""


def _write_partitions(directory, partitions):
    arguments = []
    for partition in partitions:
        path = directory / f"{partition.kind.name.lower()}.in"
        path.write_bytes(partition.payload)
        arguments += ["--partition", f"{partition.kind.name}={path}"]
    return arguments


def test_make_bitstream(tmp_path):
    manifest = tmp_path / "design.ini"
    manifest.write_text(MANIFEST)
    out = tmp_path / "design.bit"

    status = main(["make-bitstream", "--manifest", str(manifest), "--out", str(out)])

    assert status == EXIT_OK
    assert out.read_bytes() == load_manifest(str(manifest)).to_bytes()


def test_pack_unpack_and_measure(tmp_path, capsys, partitions, image, bbram_key):
    key_file = tmp_path / "bbram.key"
    key_file.write_text(bbram_key.key.hex())
    packed = tmp_path / "boot.img"
    arguments = _write_partitions(tmp_path, partitions)

    status = main(
        ["pack", "--key-file", str(key_file), "--out", str(packed)] + arguments
    )
    assert status == EXIT_OK

    out_dir = tmp_path / "unpacked"
    status = main(
        ["unpack", str(packed), "--key-file", str(key_file), "--out-dir", str(out_dir)]
    )
    assert status == EXIT_OK
    for partition in partitions:
        path = out_dir / f"{partition.kind.name.lower()}.bin"
        assert path.read_bytes() == partition.payload

    # nonces differ but the measurements only cover plaintext
    capsys.readouterr()
    assert main(["measure", str(packed), "--key-file", str(key_file)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    _, measurements = unpack_and_measure(image, bbram_key)
    assert len(lines) == 8
    assert lines[-1] == f"H_BOOT   {measurements.h_boot().hex()}"


def test_pack_rejects_bad_partitions(tmp_path, capsys, partitions, bbram_key):
    key_file = tmp_path / "bbram.key"
    key_file.write_bytes(bbram_key.key)
    arguments = _write_partitions(tmp_path, partitions)
    out = str(tmp_path / "boot.img")

    # test case 1: a partition missing
    status = main(["pack", "--key-file", str(key_file), "--out", out] + arguments[2:])
    assert status == EXIT_REJECTED

    # test case 2: unknown partition name
    status = main(
        ["pack", "--key-file", str(key_file), "--out", out, "--partition", "BIOS=x"]
    )
    assert status == EXIT_REJECTED
    assert "unknown partition" in capsys.readouterr().err


def test_unpack_with_wrong_key(tmp_path, image):
    packed = tmp_path / "boot.img"
    packed.write_bytes(image.to_bytes())
    key_file = tmp_path / "wrong.key"
    key_file.write_bytes(b"\x01" * 32)

    status = main(["measure", str(packed), "--key-file", str(key_file)])

    assert status == EXIT_AUTH_FAILURE
