"""Big-endian readers and writers shared by every binary format of the package:
the RCBI boot image, the RCTB bitstream container, wire frames and snapshots.
"""

import struct
from typing import List

from rctee.errors import ErrorCode, RcteeError

SHORT_FIELD_MAX = 0xFFFF


class Reader:
    """
    Consumes a byte string from left to right.

    Every failure (truncation, trailing bytes, oversize length prefix) raises
    :class:`~rctee.errors.RcteeError` with ``error_code``, never ``struct.error`` or
    ``IndexError``.
    """

    def __init__(self, data: bytes, error_code: ErrorCode = ErrorCode.MALFORMED):
        self._data = memoryview(bytes(data))
        self._offset = 0
        self._error_code = error_code

    @property
    def remaining(self) -> int:
        return len(self._data) - self._offset

    def take(self, n: int) -> bytes:
        if n < 0 or n > self.remaining:
            raise RcteeError(
                self._error_code,
                f"needed {n} bytes at offset {self._offset}, {self.remaining} left",
            )
        chunk = self._data[self._offset : self._offset + n].tobytes()
        self._offset += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u64(self) -> int:
        return struct.unpack(">Q", self.take(8))[0]

    def short_bytes(self) -> bytes:
        return self.take(self.u16())

    def bulk_bytes(self) -> bytes:
        return self.take(self.u64())

    def u64_list(self) -> List[int]:
        return [self.u64() for _ in range(self.u16())]

    def finish(self) -> None:
        if self.remaining:
            raise RcteeError(
                self._error_code, f"{self.remaining} trailing bytes after the record"
            )


class Writer:
    def __init__(self) -> None:
        self._chunks: List[bytes] = []

    def raw(self, data: bytes) -> "Writer":
        self._chunks.append(bytes(data))
        return self

    def u8(self, value: int) -> "Writer":
        return self.raw(struct.pack(">B", value))

    def u16(self, value: int) -> "Writer":
        return self.raw(struct.pack(">H", value))

    def u64(self, value: int) -> "Writer":
        return self.raw(struct.pack(">Q", value))

    def short_bytes(self, data: bytes) -> "Writer":
        if len(data) > SHORT_FIELD_MAX:
            raise RcteeError(
                ErrorCode.MALFORMED,
                f"field of {len(data)} bytes does not fit a 2-byte length prefix",
            )
        return self.u16(len(data)).raw(data)

    def bulk_bytes(self, data: bytes) -> "Writer":
        return self.u64(len(data)).raw(data)

    def u64_list(self, values: List[int]) -> "Writer":
        self.u16(len(values))
        for value in values:
            self.u64(value)
        return self

    def getvalue(self) -> bytes:
        return b"".join(self._chunks)
