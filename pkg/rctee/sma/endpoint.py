"""Frame-level entry point of the SMA, reached through the proxy."""

import logging
from typing import List

from rctee.device import SharedMemoryHandle
from rctee.errors import ErrorCode, RcteeError
from rctee.sma.application import SecureManagementApp
from rctee.wire import (
    AttestRequest,
    AttestResponse,
    ChallengeAnswer,
    ChallengeForward,
    DeployAck,
    DeployRequest,
    Error,
    InvokeRequest,
    InvokeResponse,
    Message,
    Ping,
    Pong,
    decode,
    encode,
)

logger = logging.getLogger(__name__)


class SmaEndpoint:
    """Decodes the frames relayed by the proxy and dispatches them to the SMA."""

    def __init__(self, app: SecureManagementApp) -> None:
        self.app = app

    def receive_deploy_data(self, handle: SharedMemoryHandle) -> None:
        self.app.receive_deploy_data(handle)

    def handle_frame(self, frame: bytes) -> List[bytes]:
        try:
            reply = self.dispatch(decode(frame))
        except RcteeError as error:
            reply = Error.from_exception(error)
        return [encode(reply)]

    def dispatch(self, message: Message) -> Message:
        if isinstance(message, AttestRequest):
            delta, epsilon = self.app.handle_attest_request(message.cert)
            return AttestResponse(delta, epsilon)

        if isinstance(message, ChallengeForward):
            return ChallengeAnswer(self.app.handle_challenge(message.challenge))

        if isinstance(message, DeployRequest):
            return DeployAck(int(self.app.handle_deploy_request(message.signature)))

        if isinstance(message, InvokeRequest):
            return InvokeResponse(self.app.handle_invoke(message.sealed))

        if isinstance(message, Ping):
            return Pong(self.app.handle_ping(message.sealed))

        logger.warning("SMA received unexpected %s", type(message).__name__)
        raise RcteeError(
            ErrorCode.UNKNOWN_TYPE,
            f"{type(message).__name__} is not handled by the SMA",
        )
