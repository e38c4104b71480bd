import struct
from typing import Iterator

from rctee.crypto.primitives import hash_data
from rctee.errors import ErrorCode, RcteeError


class Drbg:
    """
    Hash-based deterministic random bit generator.

    The stream is ``hash(seed || 0) || hash(seed || 1) || ...`` with the counter
    encoded as 8 bytes big-endian.

    Parameters
    ----------
    seed : bytes
        Non-empty seed.

    Raises
    ------
    RcteeError
        EMPTY_SEED when the seed is empty.
    """

    def __init__(self, seed: bytes) -> None:
        if not seed:
            raise RcteeError(ErrorCode.EMPTY_SEED, "the DRBG seed must not be empty")
        self._seed = bytes(seed)
        self._counter = 0
        self._buffer = b""

    def _block(self) -> bytes:
        block = hash_data(self._seed + struct.pack(">Q", self._counter))
        self._counter += 1
        return block

    def read(self, n: int) -> bytes:
        """Returns the next ``n`` bytes of the stream."""
        if n < 0:
            raise RcteeError(ErrorCode.BAD_PARAMS, f"n must be >= 0. Got {n} instead.")
        chunks = [self._buffer]
        available = len(self._buffer)
        while available < n:
            block = self._block()
            chunks.append(block)
            available += len(block)
        data = b"".join(chunks)
        self._buffer = data[n:]
        return data[:n]

    def __call__(self, n: int) -> bytes:
        return self.read(n)

    def __iter__(self) -> Iterator[int]:
        while True:
            yield from self.read(48)


def drbg(seed: bytes) -> Drbg:
    """Opens an unbounded deterministic byte stream seeded with ``seed``."""
    return Drbg(seed)
