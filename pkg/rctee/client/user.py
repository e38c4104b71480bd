"""
The user client: enrollment, attestation with device authentication, bitstream
deployment and IP invocation.
"""

import hmac
import logging
import os
from typing import Optional, Sequence, Tuple, Type, TypeVar

from rctee.client.identity import UserIdentity
from rctee.client.manifest import DesignManifest, IpKey
from rctee.client.session import DeviceSession
from rctee.client.storage import ClientStore
from rctee.crypto import (
    aead_open,
    aead_seal,
    hash_data,
    session_key,
    sign,
    sign_keygen,
    verify_certificate,
)
from rctee.device import IpInvocation
from rctee.errors import ErrorCode, RcteeError, error_from_code
from rctee.image import IpDescriptor
from rctee.protocol import (
    DEPLOY_AAD,
    DEPLOY_LABEL,
    INVOKE_AAD,
    INVOKE_LABEL,
    INVOKE_RESPONSE_LABEL,
    PING_AAD,
    PING_LABEL,
    PING_TOKEN_SIZE,
    PONG_LABEL,
    decode_invoke_response,
    encode_invoke_request,
    session_nonce,
)
from rctee.wire import (
    AttestRequest,
    AttestResponse,
    ChallengeAnswer,
    ChallengeForward,
    DeployAck,
    DeployData,
    DeployRequest,
    Error,
    FrameConnection,
    InvokeRequest,
    InvokeResponse,
    Message,
    Ping,
    Pong,
    TtpReject,
    TtpVerifyRequest,
    TtpVerifyResponse,
    UserEnrollRequest,
    UserEnrollResponse,
)

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=Message)


def expect_reply(reply: Message, expected: Type[M]) -> M:
    """
    Returns ``reply`` if it has the expected type.

    Raises
    ------
    RcteeError
        The code of an ``Error`` frame, TTP_REJECTED with ``reason`` set for a
        ``TtpReject``, MALFORMED for any other message.
    """
    if isinstance(reply, expected):
        return reply
    if isinstance(reply, Error):
        raise error_from_code(reply.code, reply.detail)
    if isinstance(reply, TtpReject):
        try:
            reason: Optional[ErrorCode] = ErrorCode(reply.reason)
        except ValueError:
            reason = None
        name = reason.name if reason is not None else f"{reply.reason:#06x}"
        raise RcteeError(ErrorCode.TTP_REJECTED, name, reason=reason)
    raise RcteeError(
        ErrorCode.MALFORMED,
        f"expected {expected.__name__}, received {type(reply).__name__}",
    )


class UserClient:
    """
    Drives the user side of the protocol for one enrolled identity.

    The connections passed to each operation may be sockets
    (:meth:`FrameConnection.connect`) or in-process connections; the client
    does not care what sits between itself and the device.

    Parameters
    ----------
    identity : UserIdentity
    store : ClientStore, default=None
        When given, sessions are saved after every counter change.
    """

    def __init__(
        self, identity: UserIdentity, store: Optional[ClientStore] = None
    ) -> None:
        self.identity = identity
        self.store = store

    @classmethod
    def enroll(
        cls,
        ttp: FrameConnection,
        seed: Optional[bytes] = None,
        store: Optional[ClientStore] = None,
    ) -> "UserClient":
        """
        Creates a key pair and has the TTP certify it.

        Parameters
        ----------
        ttp : FrameConnection
        seed : bytes, default=None
            32-byte key seed; random when None.
        store : ClientStore, default=None
            The identity is saved there.
        """
        keys = sign_keygen(seed)
        reply = expect_reply(
            ttp.request(UserEnrollRequest(keys.public)), UserEnrollResponse
        )
        identity = UserIdentity(reply.uid, keys, reply.cert, reply.ttp_public)
        if store is not None:
            store.save_identity(identity)
        logger.info("enrolled as user %s", identity.uid.hex())
        return cls(identity, store)

    def _save(self, session: DeviceSession) -> None:
        if self.store is not None:
            self.store.save_session(session)

    def attest(
        self, device: FrameConnection, ttp: FrameConnection, name: str = "device"
    ) -> DeviceSession:
        """
        Attests a device and authenticates it through its PUF.

        The secure boot report (delta, epsilon) is forwarded to the TTP; the
        certificate Ca(PK_DEV) it returns must verify under PK_TTP; the TTP
        challenge is then forwarded to the device and its answer compared with
        the enrolled credential digest.

        Parameters
        ----------
        device, ttp : FrameConnection
        name : str, default="device"
            Local name of the device; sessions are stored under it.

        Returns
        -------
        session : DeviceSession

        Raises
        ------
        RcteeError
            TTP_REJECTED (``reason`` holds the TTP code), CERT_INVALID,
            DEVICE_AUTH_FAIL when the device does not produce the enrolled PUF
            response, NETWORK_ERROR and any error the device reports.
        """
        report = expect_reply(
            device.request(AttestRequest(self.identity.cert)), AttestResponse
        )
        verdict = expect_reply(
            ttp.request(TtpVerifyRequest(report.delta, report.epsilon)),
            TtpVerifyResponse,
        )

        cert_dev = verdict.cert_dev
        if not verify_certificate(cert_dev, self.identity.pk_ttp):
            logger.warning("Ca(PK_DEV) does not verify under PK_TTP")
            raise RcteeError(ErrorCode.CERT_INVALID, "Ca(PK_DEV) does not verify")

        answer = expect_reply(
            device.request(ChallengeForward(verdict.challenge)), ChallengeAnswer
        )
        if not hmac.compare_digest(answer.digest, verdict.credential_digest):
            logger.warning("device %s failed PUF authentication", name)
            raise RcteeError(
                ErrorCode.DEVICE_AUTH_FAIL, "PUF response does not match the credential"
            )

        session = DeviceSession(
            device=name,
            pk_dev=cert_dev.subject_public,
            cert_dev=cert_dev,
            challenge=verdict.challenge,
            credential_digest=verdict.credential_digest,
            session_key=session_key(self.identity.dh_keys, cert_dev.subject_public),
        )
        self._save(session)
        logger.info("session established with %s", cert_dev.subject_id.hex())
        return session

    def prepare_bitstream(
        self, session: DeviceSession, manifest: DesignManifest
    ) -> Tuple[bytes, bytes]:
        """
        Seals the design under SessKey and signs the ciphertext.

        The nonce uses the current deploy counter, which :meth:`deploy` advances.

        Returns
        -------
        enc_bin : bytes
        signature : bytes
            Sig{H(enc_bin), SK_USER}.
        """
        enc_bin = aead_seal(
            session.session_key,
            session_nonce(DEPLOY_LABEL, session.deploy_counter),
            DEPLOY_AAD,
            manifest.to_bytes(),
        )
        return enc_bin, sign(self.identity.keys.secret, hash_data(enc_bin))

    def deploy(
        self,
        device: FrameConnection,
        session: DeviceSession,
        enc_bin: bytes,
        signature: bytes,
        manifest: Optional[DesignManifest] = None,
    ) -> ErrorCode:
        """
        Sends DeployData then DeployRequest and waits for the DeployAck.

        The deploy counter advances whenever the SMA acknowledged the attempt,
        successful or not. On success the manifest's IPs become the session's
        invocable IPs.

        Raises
        ------
        RcteeError
            The status of a failed DeployAck (SIG_MISMATCH, AUTH_FAIL, ...) or
            the code of an Error frame.
        """
        device.send(DeployData(enc_bin))
        reply = device.request(DeployRequest(signature))
        ack = expect_reply(reply, DeployAck)
        session.deploy_counter += 1
        if ack.status == ErrorCode.OK and manifest is not None:
            session.ips = dict(manifest.ips)
        self._save(session)
        if ack.status != ErrorCode.OK:
            raise error_from_code(ack.status, "deployment rejected by the SMA")
        logger.info("design deployed on %s", session.device)
        return ErrorCode.OK

    def deploy_manifest(
        self, device: FrameConnection, session: DeviceSession, manifest: DesignManifest
    ) -> ErrorCode:
        enc_bin, signature = self.prepare_bitstream(session, manifest)
        return self.deploy(device, session, enc_bin, signature, manifest)

    def invoke(
        self,
        device: FrameConnection,
        session: DeviceSession,
        ip: IpKey,
        inputs: Sequence[bytes],
        manifest: Optional[DesignManifest] = None,
    ) -> Tuple[bytes, ...]:
        """
        Runs a deployed IP on ``inputs``.

        Parameters
        ----------
        device : FrameConnection
        session : DeviceSession
        ip : str, bytes or IpDescriptor
            IP name, id or descriptor.
        inputs : sequence of bytes
            One record per input address of the IP.
        manifest : DesignManifest, default=None
            Where to read the IP's addresses; the session's deployed design
            when None.

        Returns
        -------
        outputs : tuple of bytes
            One record per output address.

        Raises
        ------
        RcteeError
            UNKNOWN_IP when the IP is not known locally, BAD_PARAMS for a wrong
            input count, AUTH_FAIL when the response was tampered with, and the
            sealed status of a failed invocation (ADDR_MISMATCH, KERNEL_FAULT).
        """
        descriptor: IpDescriptor = (
            manifest.ip(ip) if manifest is not None else session.ip(ip)
        )
        if len(inputs) != len(descriptor.input_addresses):
            raise RcteeError(
                ErrorCode.BAD_PARAMS,
                f"IP {descriptor.kernel} takes {len(descriptor.input_addresses)} "
                f"inputs. Got {len(inputs)} instead.",
            )
        invocation = IpInvocation(
            tuple(zip(descriptor.input_addresses, inputs)),
            descriptor.status_address,
            descriptor.output_addresses,
        )
        counter = session.invoke_counter
        sealed = aead_seal(
            session.session_key,
            session_nonce(INVOKE_LABEL, counter),
            INVOKE_AAD,
            encode_invoke_request(descriptor.ip_id, invocation),
        )

        reply = expect_reply(device.request(InvokeRequest(sealed)), InvokeResponse)
        session.invoke_counter += 1
        self._save(session)

        plaintext = aead_open(
            session.session_key,
            session_nonce(INVOKE_RESPONSE_LABEL, counter),
            INVOKE_AAD,
            reply.sealed,
        )
        status, records = decode_invoke_response(plaintext)
        if status != ErrorCode.OK:
            raise error_from_code(status, f"invocation of {descriptor.kernel} failed")
        return tuple(data for _, data in records)

    def ping(self, device: FrameConnection, session: DeviceSession) -> bool:
        """
        Checks that both ends hold the same SessKey.

        Raises
        ------
        RcteeError
            AUTH_FAIL when the pong does not open or echoes another token.
        """
        token = os.urandom(PING_TOKEN_SIZE)
        counter = session.ping_counter
        sealed = aead_seal(
            session.session_key, session_nonce(PING_LABEL, counter), PING_AAD, token
        )
        reply = expect_reply(device.request(Ping(sealed)), Pong)
        session.ping_counter += 1
        self._save(session)
        nonce = session_nonce(PONG_LABEL, counter)
        echoed = aead_open(session.session_key, nonce, PING_AAD, reply.sealed)
        if not hmac.compare_digest(echoed, token):
            raise RcteeError(ErrorCode.AUTH_FAIL, "pong echoes another token")
        return True
