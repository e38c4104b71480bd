"""
The Secure Management Application: attestation responder, IP deployment and IP
invocation, running as a trusted application on the TOS.
"""

import logging
import struct
import time
from typing import Optional, Tuple

from rctee.binary import Reader
from rctee.crypto import (
    KEY_SIZE,
    Certificate,
    Digest,
    aead_open,
    aead_seal,
    dh_from_sign,
    dh_public_from_sign_public,
    drbg,
    hash_data,
    pke_seal,
    session_key,
    sign,
    sign_keygen,
    verify,
    verify_certificate,
)
from rctee.device import FpgaSoc, SharedMemoryHandle, TaContext
from rctee.errors import ErrorCode, RcteeError
from rctee.protocol import (
    DEPLOY_AAD,
    DEPLOY_LABEL,
    INVOKE_AAD,
    INVOKE_LABEL,
    INVOKE_RESPONSE_LABEL,
    PING_AAD,
    PING_LABEL,
    PONG_LABEL,
    AttestationEnvelope,
    attestation_hash,
    credential_digest,
    decode_invoke_request,
    encode_invoke_response,
    session_nonce,
    sma_artifact_ttp_key,
)
from rctee.puf import (
    SEED_CHALLENGE_PAIRS,
    Challenge,
    random_challenge,
    seed_from_response,
)
from rctee.sma.session import SessionState, SmaSession

logger = logging.getLogger(__name__)


class SecureManagementApp:
    """
    Trusted application orchestrating attestation, deployment and invocation.

    All entry points run under the device lock, so at most one request touches
    the session at a time.

    Parameters
    ----------
    context : TaContext
        Capabilities granted by :meth:`FpgaSoc.start_ta`.

    Attributes
    ----------
    session : SmaSession
    pk_ttp : bytes
        The TTP key read from the SMA's own verified artifact.
    deployed : bool
        True once a user design replaced the initial hardware design.
    """

    def __init__(self, context: TaContext) -> None:
        self._context = context
        self.pk_ttp = sma_artifact_ttp_key(context.artifact)
        self.session = SmaSession()
        self.deployed = False
        self._sessions_started = 0
        self._pending_deploy: Optional[SharedMemoryHandle] = None

    def _require_booted(self) -> None:
        if not self._context.is_running():
            raise RcteeError(ErrorCode.NOT_BOOTED, "the SMA is not running")

    def _require_established(self) -> SmaSession:
        self._require_booted()
        if self.session.state is not SessionState.ESTABLISHED:
            raise RcteeError(
                ErrorCode.BAD_STATE, f"session is {self.session.state.value}"
            )
        return self.session

    def _fresh_entropy(self) -> bytes:
        """Per-boot random value XOR a time-derived value, then the session count."""
        boot = self._context.boot_entropy()
        clock = hash_data(struct.pack(">Q", time.time_ns()))[:KEY_SIZE]
        mixed = bytes(a ^ b for a, b in zip(boot, clock))
        self._sessions_started += 1
        return mixed + struct.pack(">Q", self._sessions_started)

    def handle_attest_request(self, cert_user: Certificate) -> Tuple[bytes, bytes]:
        """
        Answers an attestation request with the secure boot report.

        A fresh 256-pair challenge is drawn, its PUF response seeds the session
        pair (SK_DEV, PK_DEV), alpha = H(H_BOOT || #DI) is signed with SK_DEV into
        delta, and #DI || alpha || PK_DEV is sealed to the TTP as epsilon.

        Parameters
        ----------
        cert_user : Certificate
            Ca(PK_USER) issued by the TTP.

        Returns
        -------
        delta : bytes
        epsilon : bytes

        Raises
        ------
        RcteeError
            CERT_INVALID when the certificate was not issued by the TTP,
            NOT_BOOTED, PUF_NOT_PRESENT after a user design was deployed. The
            session is left unchanged on every error.
        """
        with self._context.lock:
            self._require_booted()
            if self.deployed:
                raise RcteeError(
                    ErrorCode.PUF_NOT_PRESENT,
                    "attestation is unavailable once a user design is deployed",
                )
            if not verify_certificate(cert_user, self.pk_ttp):
                logger.warning("attestation request with an invalid certificate")
                raise RcteeError(ErrorCode.CERT_INVALID, "Ca(PK_USER) does not verify")

            source = drbg(self._fresh_entropy())
            challenge = random_challenge(
                source, SEED_CHALLENGE_PAIRS, self._context.puf_oscillators
            )
            seed = seed_from_response(self._context.get_hw_puf_response(challenge))
            device_keys = sign_keygen(seed)

            alpha = attestation_hash(
                self._context.get_boot_hash(), self._context.device_id
            )
            delta = sign(device_keys.secret, alpha)
            key = session_key(dh_from_sign(device_keys), cert_user.subject_public)
            envelope = AttestationEnvelope(
                self._context.device_id, alpha, device_keys.public
            )
            ttp_dh_public = dh_public_from_sign_public(self.pk_ttp)
            epsilon = pke_seal(ttp_dh_public, envelope.to_bytes())

            if self.session.state is not SessionState.IDLE:
                logger.info("new attestation request resets the current session")
            self.session = SmaSession(
                state=SessionState.AWAIT_CHALLENGE,
                device_keys=device_keys,
                session_key=key,
                pk_user=cert_user.subject_public,
            )
            self._pending_deploy = None
            logger.info("attestation report issued")
            return delta, epsilon

    def handle_challenge(self, challenge: Challenge) -> Digest:
        """
        Returns H(R(C) || #DI) for the session challenge issued by the TTP.

        Raises
        ------
        RcteeError
            BAD_STATE outside AwaitChallenge; PUF errors such as SAME_INDEX leave
            the session waiting for a valid challenge.
        """
        with self._context.lock:
            self._require_booted()
            if self.session.state is not SessionState.AWAIT_CHALLENGE:
                raise RcteeError(
                    ErrorCode.BAD_STATE, f"session is {self.session.state.value}"
                )
            response = self._context.get_hw_puf_response(challenge)
            self.session.state = SessionState.ESTABLISHED
            logger.info("session established")
            return credential_digest(response, self._context.device_id)

    def receive_deploy_data(self, handle: SharedMemoryHandle) -> None:
        """Notes where the REE placed the encrypted bitstream."""
        with self._context.lock:
            self._pending_deploy = handle

    def _take_staged(self) -> bytes:
        """Copies the staged DeployData payload into TOS memory and unwraps it."""
        if self._pending_deploy is None:
            raise RcteeError(ErrorCode.MALFORMED, "no bitstream was received")
        handle, self._pending_deploy = self._pending_deploy, None
        reader = Reader(self._context.copy_from_shared(handle))
        enc_bin = reader.bulk_bytes()
        reader.finish()
        return enc_bin

    def _deploy(
        self, session: SmaSession, counter: int, enc_bin: bytes, signature: bytes
    ) -> None:
        if not enc_bin:
            raise RcteeError(ErrorCode.MALFORMED, "the bitstream is empty")
        session.trace.append("verify")
        if not verify(session.pk_user, hash_data(enc_bin), signature):
            logger.warning("deploy rejected: signature mismatch")
            raise RcteeError(ErrorCode.SIG_MISMATCH, "bitstream signature invalid")

        session.trace.append("decrypt")
        nonce = session_nonce(DEPLOY_LABEL, counter)
        plaintext = aead_open(session.session_key, nonce, DEPLOY_AAD, enc_bin)

        session.trace.append("program")
        self._context.program_user_hw(plaintext)
        self.deployed = True
        logger.info("user design deployed")

    def handle_deploy(self, enc_bin: bytes, signature: bytes) -> ErrorCode:
        """
        Verifies, decrypts and programs a user bitstream.

        The signature over H(Enc{Bin}) is checked before any decryption. The
        deploy counter advances on every attempt made in an established session.

        Raises
        ------
        RcteeError
            BAD_STATE outside an established session, SIG_MISMATCH, AUTH_FAIL when
            the bitstream was not sealed with the session key, MALFORMED /
            ADDR_OUT_OF_REGION / ADDR_COLLISION for an invalid container (the PL
            is unchanged).
        """
        with self._context.lock:
            session = self._require_established()
            counter = session.deploy_counter
            session.deploy_counter += 1
            self._deploy(session, counter, enc_bin, signature)
            return ErrorCode.OK

    def handle_deploy_request(self, signature: bytes) -> ErrorCode:
        """
        Deploys the bitstream the proxy staged in shared memory.

        Failures after the deploy counter advanced are returned as the status;
        only BAD_STATE and NOT_BOOTED, which leave the counter alone, are raised.
        """
        with self._context.lock:
            session = self._require_established()
            counter = session.deploy_counter
            session.deploy_counter += 1
            try:
                self._deploy(session, counter, self._take_staged(), signature)
            except RcteeError as error:
                return error.code
            return ErrorCode.OK

    def handle_invoke(self, enc_request: bytes) -> bytes:
        """
        Runs one sealed IP invocation.

        Returns
        -------
        enc_response : bytes
            Sealed status and output records. Errors raised after the request
            decrypted (UNKNOWN_IP, ADDR_MISMATCH, KERNEL_FAULT, MALFORMED) are
            sealed into the response.

        Raises
        ------
        RcteeError
            AUTH_FAIL when the request does not decrypt under the expected nonce,
            for instance a replay. The invoke counter does not move in that case.
        """
        with self._context.lock:
            session = self._require_established()
            counter = session.invoke_counter
            request = aead_open(
                session.session_key,
                session_nonce(INVOKE_LABEL, counter),
                INVOKE_AAD,
                enc_request,
            )
            session.invoke_counter += 1

            try:
                ip_id, invocation = decode_invoke_request(request)
                outputs = self._context.usr_def_ip(ip_id, invocation)
                plaintext = encode_invoke_response(ErrorCode.OK, outputs)
            except RcteeError as error:
                logger.warning("invocation failed: %s", error.code.name)
                plaintext = encode_invoke_response(error.code)

            return aead_seal(
                session.session_key,
                session_nonce(INVOKE_RESPONSE_LABEL, counter),
                INVOKE_AAD,
                plaintext,
            )

    def handle_ping(self, sealed: bytes) -> bytes:
        """Echoes the client's token under the pong nonce, proving key equality."""
        with self._context.lock:
            session = self._require_established()
            counter = session.ping_counter
            nonce = session_nonce(PING_LABEL, counter)
            token = aead_open(session.session_key, nonce, PING_AAD, sealed)
            session.ping_counter += 1
            return aead_seal(
                session.session_key, session_nonce(PONG_LABEL, counter), PING_AAD, token
            )


def launch_sma(soc: FpgaSoc) -> SecureManagementApp:
    """
    Starts the SMA found in the ROS file system, as the CSP operator does after
    boot.

    Raises
    ------
    RcteeError
        TA_AUTH_FAIL when the stored artifact is not signed under PK_TA.
    """
    artifact, signature = soc.ros_sma_artifact()
    return SecureManagementApp(soc.start_ta(artifact, signature))
