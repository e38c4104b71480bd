"""Frame-level adversary sitting between the client and the proxy or the TTP."""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Type, TypeVar

from rctee.wire import FrameConnection, Message, decode, encode, split_frame

logger = logging.getLogger(__name__)

# maps a frame to the frame actually delivered, or None to drop it
FrameHook = Callable[[bytes], Optional[bytes]]

M = TypeVar("M", bound=Message)

OUTBOUND = "out"
INBOUND = "in"


@dataclass(frozen=True)
class CapturedFrame:
    link: str
    direction: str
    message_type: int
    frame: bytes


class Wiretap:
    """Everything the adversary saw, in order, across all links."""

    def __init__(self) -> None:
        self.frames: List[CapturedFrame] = []

    def capture(self, link: str, direction: str, frame: bytes) -> None:
        self.frames.append(CapturedFrame(link, direction, frame[4], bytes(frame)))

    def of_type(self, message_type: int) -> List[CapturedFrame]:
        return [f for f in self.frames if f.message_type == message_type]

    def last(self, message_type: int) -> bytes:
        return self.of_type(message_type)[-1].frame

    def contains(self, needle: bytes) -> bool:
        return any(needle in f.frame for f in self.frames)

    def clear(self) -> None:
        self.frames = []


class Interceptor(FrameConnection):
    """
    Wraps a connection; hooks may rewrite or drop frames in either direction and
    every delivered frame is recorded in the wiretap.

    Parameters
    ----------
    inner : FrameConnection
    link : str
        Name recorded with captured frames, "device" or "ttp".
    tap : Wiretap, default=None
    """

    def __init__(
        self, inner: FrameConnection, link: str, tap: Optional[Wiretap] = None
    ) -> None:
        self._inner = inner
        self.link = link
        self.tap = tap if tap is not None else Wiretap()
        self._outbound: List[FrameHook] = []
        self._inbound: List[FrameHook] = []

    def on_send(self, hook: FrameHook) -> "Interceptor":
        self._outbound.append(hook)
        return self

    def on_receive(self, hook: FrameHook) -> "Interceptor":
        self._inbound.append(hook)
        return self

    def clear_hooks(self) -> None:
        self._outbound = []
        self._inbound = []

    @staticmethod
    def _apply(hooks: List[FrameHook], frame: bytes) -> Optional[bytes]:
        result: Optional[bytes] = frame
        for hook in hooks:
            if result is None:
                break
            result = hook(result)
        return result

    def send_raw(self, frame: bytes) -> None:
        delivered = self._apply(self._outbound, bytes(frame))
        if delivered is None:
            logger.debug("%s: dropped outbound frame type %#04x", self.link, frame[4])
            return
        self.tap.capture(self.link, OUTBOUND, delivered)
        self._inner.send_raw(delivered)

    def inject(self, frame: bytes) -> None:
        """Sends a frame of the adversary's choosing, bypassing the hooks."""
        self.tap.capture(self.link, OUTBOUND, frame)
        self._inner.send_raw(frame)

    def receive_raw(self) -> bytes:
        while True:
            frame = self._inner.receive_raw()
            delivered = self._apply(self._inbound, frame)
            if delivered is not None:
                self.tap.capture(self.link, INBOUND, delivered)
                return delivered

    def close(self) -> None:
        self._inner.close()


def rewrite(message_class: Type[M], change: Callable[[M], Message]) -> FrameHook:
    """A hook applying ``change`` to every frame carrying ``message_class``."""

    def hook(frame: bytes) -> Optional[bytes]:
        message_type, _ = split_frame(frame)
        if message_type != message_class.TYPE:
            return frame
        return encode(change(decode(frame)))  # type: ignore[arg-type]

    return hook


def flip_payload_byte(message_class: Type[Message], offset: int = -1) -> FrameHook:
    """A hook flipping the lowest bit of one payload byte of ``message_class``."""

    def hook(frame: bytes) -> Optional[bytes]:
        if frame[4] != message_class.TYPE:
            return frame
        tampered = bytearray(frame)
        tampered[offset] ^= 0x01
        return bytes(tampered)

    return hook


def substitute(message_type: int, replacement: bytes) -> FrameHook:
    """A hook replacing every frame of ``message_type`` with ``replacement``."""

    def hook(frame: bytes) -> Optional[bytes]:
        return replacement if frame[4] == message_type else frame

    return hook
