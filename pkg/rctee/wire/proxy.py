"""The REE proxy: relays frames between remote parties and the SMA."""

import logging
from typing import Callable, List, Optional

from rctee.device import FpgaSoc, SharedMemoryHandle
from rctee.errors import ErrorCode, RcteeError
from rctee.wire.codec import split_frame
from rctee.wire.messages import MessageType
from rctee.wire.transport import error_frame

logger = logging.getLogger(__name__)

_PENDING_ERROR = "pending_error"


class Proxy:
    """
    Untrusted relay running in the ROS.

    The proxy only reads frame headers. DeployData payloads are written to the
    REE/TEE shared memory and announced to the SMA; every other frame is handed
    to the SMA unchanged and the SMA's replies are returned unchanged.

    Parameters
    ----------
    soc : FpgaSoc
    endpoint : callable
        Returns the running SMA endpoint, or None when no SMA runs. The endpoint
        offers ``handle_frame(frame) -> list of frames`` and
        ``receive_deploy_data(handle)``.
    """

    def __init__(self, soc: FpgaSoc, endpoint: Callable[[], Optional[object]]) -> None:
        self._soc = soc
        self._endpoint = endpoint
        self.frames_relayed = 0

    def receive_write_bitstream(self, payload: bytes) -> SharedMemoryHandle:
        """
        Writes a received DeployData payload into shared memory.

        ``payload`` is the frame body, length prefix included. The errors below
        hold for direct callers. Over the wire the prefix keeps the body
        non-empty and the frame cap keeps it within the shared region; an empty
        bitstream is refused by the SMA.

        Raises
        ------
        RcteeError
            MALFORMED for an empty payload, SHARED_MEM_OVERFLOW when it exceeds
            the shared region, NOT_RUNNING.
        """
        handle = self._soc.write_shared(payload)
        logger.debug("wrote %d bytes to shared memory", handle.length)
        return handle

    def handle_frame(self, frame: bytes, state: dict) -> List[bytes]:
        message_type, payload = split_frame(frame)
        endpoint = self._endpoint()
        self.frames_relayed += 1

        if message_type == MessageType.DEPLOY_DATA:
            # DeployData has no reply of its own; failures answer the DeployRequest
            try:
                handle = self.receive_write_bitstream(payload)
                if endpoint is None:
                    raise RcteeError(ErrorCode.SMA_UNAVAILABLE, "no SMA running")
                endpoint.receive_deploy_data(handle)  # type: ignore[attr-defined]
            except RcteeError as error:
                logger.warning("bitstream not staged: %s", error.code.name)
                state[_PENDING_ERROR] = error
            return []

        if message_type == MessageType.DEPLOY_REQUEST and _PENDING_ERROR in state:
            return [error_frame(state.pop(_PENDING_ERROR))]

        if endpoint is None:
            missing = RcteeError(ErrorCode.SMA_UNAVAILABLE, "no SMA running")
            return [error_frame(missing)]
        return list(endpoint.handle_frame(frame))  # type: ignore[attr-defined]
