"""Framed stream sockets on loopback, client and server side."""

import logging
import socket
import socketserver
import threading
from collections import deque
from typing import Any, Callable, Deque, Iterable, Optional, Tuple

from rctee.errors import ErrorCode, RcteeError
from rctee.wire.codec import (
    HEADER_SIZE,
    decode,
    decode_body,
    encode,
    encode_frame,
    frame_length,
    split_frame,
)
from rctee.wire.messages import Error, Message

logger = logging.getLogger(__name__)

Address = Tuple[str, int]

DEFAULT_TIMEOUT = 30.0


def parse_address(value: str) -> Address:
    """``"host:port"`` to ``(host, port)``."""
    host, sep, port = str(value).rpartition(":")
    if not sep or not port.isdigit():
        raise RcteeError(
            ErrorCode.BAD_PARAMS, f"address must be host:port. Got {value!r} instead."
        )
    return host or "127.0.0.1", int(port)


def format_address(address: Address) -> str:
    return f"{address[0]}:{address[1]}"


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    chunks = []
    remaining = n
    while remaining:
        chunk = sock.recv(min(remaining, 1 << 20))
        if not chunk:
            raise RcteeError(ErrorCode.NETWORK_ERROR, "connection closed by peer")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def read_frame(sock: socket.socket) -> Optional[bytes]:
    """
    Reads one complete frame. Returns None on a clean end of stream between
    frames.

    Raises
    ------
    RcteeError
        OVERSIZE / MALFORMED for a bad header, NETWORK_ERROR when the stream ends
        inside a frame.
    """
    try:
        first = sock.recv(HEADER_SIZE)
    except OSError as error:
        raise RcteeError(ErrorCode.NETWORK_ERROR, str(error)) from None
    if not first:
        return None
    header = first + _recv_exact(sock, HEADER_SIZE - len(first))
    length = frame_length(header)
    return header + _recv_exact(sock, length)


class FrameConnection:
    """
    A client connection exchanging whole frames.

    Parameters
    ----------
    sock : socket.socket
        A connected stream socket.
    """

    def __init__(self, sock: socket.socket) -> None:
        self._sock = sock

    @classmethod
    def connect(
        cls, address: Address, timeout: float = DEFAULT_TIMEOUT
    ) -> "FrameConnection":
        try:
            sock = socket.create_connection(address, timeout=timeout)
        except OSError as error:
            raise RcteeError(
                ErrorCode.NETWORK_ERROR,
                f"cannot reach {format_address(address)}: {error}",
            ) from None
        return cls(sock)

    def send_raw(self, frame: bytes) -> None:
        try:
            self._sock.sendall(frame)
        except OSError as error:
            raise RcteeError(ErrorCode.NETWORK_ERROR, str(error)) from None

    def receive_raw(self) -> bytes:
        frame = read_frame(self._sock)
        if frame is None:
            raise RcteeError(ErrorCode.NETWORK_ERROR, "connection closed by peer")
        return frame

    def send(self, message: Message) -> None:
        self.send_raw(encode(message))

    def receive(self) -> Message:
        return decode(self.receive_raw())

    def request(self, message: Message) -> Message:
        self.send(message)
        return self.receive()

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass

    def __enter__(self) -> "FrameConnection":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.close()


# A frame handler maps one raw frame to the raw frames sent back (possibly none).
# ``state`` is a per-connection dict owned by the handler.
FrameHandler = Callable[[bytes, dict], Iterable[bytes]]


def error_frame(error: RcteeError) -> bytes:
    return encode(Error.from_exception(error))


class _ConnectionHandler(socketserver.BaseRequestHandler):
    def handle(self) -> None:
        handler: FrameHandler = self.server.frame_handler  # type: ignore[attr-defined]
        state: dict = {}
        peer = format_address(self.client_address)
        logger.debug("connection from %s", peer)
        while True:
            try:
                frame = read_frame(self.request)
            except RcteeError as error:
                # a corrupt header leaves the stream unsynchronised: answer and hang up
                if error.code is not ErrorCode.NETWORK_ERROR:
                    self._send(error_frame(error))
                break
            if frame is None:
                break
            try:
                replies = list(handler(frame, state))
            except RcteeError as error:
                replies = [error_frame(error)]
            except Exception:
                logger.exception("handler failed on a frame from %s", peer)
                internal = RcteeError(ErrorCode.MALFORMED, "internal error")
                replies = [error_frame(internal)]
            if not all(self._send(reply) for reply in replies):
                break
        logger.debug("connection from %s closed", peer)

    def _send(self, frame: bytes) -> bool:
        try:
            self.request.sendall(frame)
        except OSError:
            return False
        return True


class _ThreadingServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True


class FrameServer:
    """
    Threaded TCP server dispatching every received frame to ``handler``.

    One thread per connection; frames of one connection are handled in order.

    Parameters
    ----------
    address : (host, port)
        Port 0 picks an ephemeral port, see :attr:`address`.
    handler : callable
        ``handler(frame, state) -> iterable of frames``.
    name : str
        Used in log messages.
    """

    def __init__(self, address: Address, handler: FrameHandler, name: str = "server"):
        self.name = name
        self._server = _ThreadingServer(address, _ConnectionHandler)
        self._server.frame_handler = handler  # type: ignore[attr-defined]
        self._thread: Optional[threading.Thread] = None

    @property
    def address(self) -> Address:
        host, port = self._server.server_address[:2]
        return host, port

    def start(self) -> "FrameServer":
        self._thread = threading.Thread(
            target=self._server.serve_forever, name=self.name, daemon=True
        )
        self._thread.start()
        logger.info("%s listening on %s", self.name, format_address(self.address))
        return self

    def serve_forever(self) -> None:
        logger.info("%s listening on %s", self.name, format_address(self.address))
        self._server.serve_forever()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join()
        logger.info("%s stopped", self.name)

    def __enter__(self) -> "FrameServer":
        return self.start()

    def __exit__(self, *exc_info: Any) -> None:
        self.stop()


def message_handler(
    handle: Callable[[Message, dict], Iterable[Message]]
) -> FrameHandler:
    """Adapts a handler of decoded messages to a :data:`FrameHandler`."""

    def frame_handler(frame: bytes, state: dict) -> Iterable[bytes]:
        message_type, payload = split_frame(frame)
        message = decode_body(message_type, payload)
        return [encode(reply) for reply in handle(message, state)]

    return frame_handler


class LocalConnection(FrameConnection):
    """
    In-process stand-in for a socket connection: frames go straight to a
    :data:`FrameHandler` and its replies are queued for :meth:`receive_raw`.
    """

    def __init__(self, handler: FrameHandler) -> None:
        self._handler = handler
        self._state: dict = {}
        self._replies: Deque[bytes] = deque()

    def send_raw(self, frame: bytes) -> None:
        try:
            self._replies.extend(self._handler(bytes(frame), self._state))
        except RcteeError as error:
            self._replies.append(error_frame(error))

    def receive_raw(self) -> bytes:
        if not self._replies:
            raise RcteeError(ErrorCode.NETWORK_ERROR, "no reply pending")
        return self._replies.popleft()

    def close(self) -> None:
        self._replies.clear()
