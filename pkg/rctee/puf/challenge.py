"""Challenge and response values of the RO-PUF and their wire encodings."""

import struct
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from rctee.errors import ErrorCode, RcteeError

MAX_CHALLENGE_PAIRS = 256
CRP_CHALLENGE_PAIRS = 64
SEED_CHALLENGE_PAIRS = 256


@dataclass(frozen=True)
class Challenge:
    """
    An ordered sequence of oscillator pairs, one pair per response bit.

    Encoded on the wire as the pair count (2 bytes, big-endian) followed by two
    one-byte indices per pair. Index validity against a concrete oscillator array is
    checked when the challenge is evaluated, not here, so that a malformed pair can
    travel to the device and be rejected there.
    """

    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)

    def to_bytes(self) -> bytes:
        if any(not (0 <= x < 256) for pair in self.pairs for x in pair):
            raise RcteeError(ErrorCode.BAD_PARAMS, "pair indices must fit in one byte")
        body = bytes(x for pair in self.pairs for x in pair)
        return struct.pack(">H", len(self.pairs)) + body

    @classmethod
    def from_bytes(cls, data: bytes) -> "Challenge":
        if len(data) < 2:
            raise RcteeError(ErrorCode.MALFORMED, "challenge truncated")
        (count,) = struct.unpack_from(">H", data, 0)
        if len(data) != 2 + 2 * count:
            raise RcteeError(
                ErrorCode.MALFORMED,
                f"challenge of {count} pairs must be {2 + 2 * count} bytes. "
                f"Got {len(data)} instead.",
            )
        body = data[2:]
        return cls(tuple((body[2 * k], body[2 * k + 1]) for k in range(count)))


@dataclass(frozen=True)
class Response:
    """Response bits R(C); packed MSB-first, first bit is the most significant."""

    bits: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", tuple(int(bool(b)) for b in self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.bits, dtype=np.uint8)

    def packed(self) -> bytes:
        return np.packbits(self.as_array()).tobytes()

    def to_bytes(self) -> bytes:
        return struct.pack(">H", len(self.bits)) + self.packed()

    @classmethod
    def from_packed(cls, packed: bytes, n_bits: int) -> "Response":
        if len(packed) != (n_bits + 7) // 8:
            raise RcteeError(ErrorCode.MALFORMED, "packed response has the wrong size")
        bits = np.unpackbits(np.frombuffer(packed, dtype=np.uint8), count=n_bits)
        return cls(tuple(bits.tolist()))

    @classmethod
    def from_bytes(cls, data: bytes) -> "Response":
        if len(data) < 2:
            raise RcteeError(ErrorCode.MALFORMED, "response truncated")
        (n_bits,) = struct.unpack_from(">H", data, 0)
        return cls.from_packed(bytes(data[2:]), n_bits)


def random_challenge(
    source: Callable[[int], bytes], n_pairs: int, n_oscillators: int
) -> Challenge:
    """
    Draws a challenge from a byte source such as a :class:`~rctee.crypto.Drbg`.

    Each index consumes one byte; bytes that would bias the modulo reduction are
    rejected, and so are pairs with i == j.
    """
    if not 2 <= n_oscillators <= 256:
        raise RcteeError(
            ErrorCode.BAD_PARAMS,
            f"n_oscillators must be between 2 and 256. Got {n_oscillators} instead.",
        )
    limit = (256 // n_oscillators) * n_oscillators

    pairs = []
    while len(pairs) < n_pairs:
        raw = np.frombuffer(source(2 * (n_pairs - len(pairs))), dtype=np.uint8)
        indices = raw[raw < limit] % n_oscillators
        for i, j in indices[: len(indices) // 2 * 2].reshape(-1, 2).tolist():
            if i != j and len(pairs) < n_pairs:
                pairs.append((i, j))
    return Challenge(tuple(pairs))


def _pairs_array(challenges: Sequence[Challenge]) -> np.ndarray:
    return np.stack([c.as_array() for c in challenges])
