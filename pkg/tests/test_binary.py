import pytest

from rctee.binary import Reader, Writer
from rctee.errors import ErrorCode, RcteeError


def test_writer_layout_is_big_endian():
    data = (
        Writer()
        .u8(1)
        .u16(0x0203)
        .u64(4)
        .short_bytes(b"ab")
        .bulk_bytes(b"c")
        .u64_list([5])
        .getvalue()
    )

    assert data == (
        b"\x01"
        + b"\x02\x03"
        + b"\x00" * 7
        + b"\x04"
        + b"\x00\x02ab"
        + b"\x00" * 7
        + b"\x01c"
        + b"\x00\x01"
        + b"\x00" * 7
        + b"\x05"
    )


def test_reader_reads_back_fields():
    data = Writer().u16(7).short_bytes(b"xyz").u64_list([1, 2]).getvalue()
    reader = Reader(data)

    assert reader.u16() == 7
    assert reader.short_bytes() == b"xyz"
    assert reader.u64_list() == [1, 2]
    assert reader.remaining == 0
    reader.finish()


def test_truncation_raises_the_reader_code():
    reader = Reader(b"\x00\x05ab")
    with pytest.raises(RcteeError) as record:
        reader.short_bytes()
    assert record.value.code is ErrorCode.MALFORMED

    reader = Reader(b"\x00", error_code=ErrorCode.BAD_REPORT)
    with pytest.raises(RcteeError) as record:
        reader.u16()
    assert record.value.code is ErrorCode.BAD_REPORT


def test_trailing_bytes_are_rejected():
    reader = Reader(b"\x01\x02")
    reader.u8()
    with pytest.raises(RcteeError):
        reader.finish()


def test_short_field_limit():
    with pytest.raises(RcteeError) as record:
        Writer().short_bytes(bytes(0x10000))
    assert record.value.code is ErrorCode.MALFORMED
