"""Wire endpoint of the TTP."""

import logging
from typing import List, Optional

from rctee.errors import ErrorCode, RcteeError
from rctee.ttp.service import TrustedThirdParty
from rctee.wire import (
    Address,
    FrameServer,
    Message,
    MessageType,
    TtpReject,
    TtpVerifyRequest,
    TtpVerifyResponse,
    UserEnrollRequest,
    UserEnrollResponse,
    message_handler,
)

logger = logging.getLogger(__name__)

# the only message types the TTP accepts; none of them carries session data
ACCEPTED_TYPES = frozenset(
    {MessageType.TTP_VERIFY_REQUEST, MessageType.USER_ENROLL_REQUEST}
)


class TtpServer:
    """
    Serves :class:`TrustedThirdParty` over framed sockets.

    Parameters
    ----------
    ttp : TrustedThirdParty
    database_path : str, default=None
        The database is saved there after every change.
    """

    def __init__(self, ttp: TrustedThirdParty, database_path: Optional[str] = None):
        self.ttp = ttp
        self.database_path = database_path
        self._server: Optional[FrameServer] = None

    def _persist(self) -> None:
        if self.database_path:
            self.ttp.database.save(self.database_path)

    def handle(self, message: Message, state: dict) -> List[Message]:
        if message.TYPE not in ACCEPTED_TYPES:
            raise RcteeError(
                ErrorCode.UNKNOWN_TYPE,
                f"the TTP does not accept {type(message).__name__}",
            )
        try:
            if isinstance(message, TtpVerifyRequest):
                cert_dev, credential = self.ttp.verify_attestation(
                    message.delta, message.epsilon
                )
                reply: Message = TtpVerifyResponse(
                    cert_dev, credential.challenge, credential.digest
                )
            elif isinstance(message, UserEnrollRequest):
                cert, uid, pk_ttp = self.ttp.enroll_user(message.public_key)
                reply = UserEnrollResponse(cert, uid, pk_ttp)
        except RcteeError as error:
            logger.warning(
                "TTP rejected %s: %s", type(message).__name__, error.code.name
            )
            return [TtpReject(int(error.code))]
        self._persist()
        return [reply]

    def serve(self, address: Address) -> "TtpServer":
        self._server = FrameServer(address, message_handler(self.handle), name="ttp")
        self._server.start()
        return self

    def serve_forever(self, address: Address) -> None:
        FrameServer(address, message_handler(self.handle), name="ttp").serve_forever()

    @property
    def address(self) -> Address:
        return self._server.address

    def stop(self) -> None:
        if self._server is not None:
            self._server.stop()
            self._server = None
