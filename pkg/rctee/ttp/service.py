"""
The Trusted Third Party: enrollment of devices and users, verification of secure
boot reports and issuance of device credentials.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import pandas as pd
from sklearn.utils import check_random_state

from rctee.crypto import (
    KEY_SIZE,
    PUBLIC_KEY_SIZE,
    Certificate,
    Digest,
    Drbg,
    SignKeyPair,
    SymmetricKey,
    dh_from_sign,
    dh_public_from_sign_public,
    issue_certificate,
    pke_open,
    sign_keygen,
    verify,
)
from rctee.device import device_id_from_seed
from rctee.errors import ErrorCode, RcteeError
from rctee.image import BootableImage, golden_measurements, package
from rctee.parameter_checks import _check_length
from rctee.protocol import AttestationEnvelope, attestation_hash, credential_digest
from rctee.puf import Challenge, enroll_crps, instantiate
from rctee.puf.ro_puf import RandomState
from rctee.ttp.database import TtpDatabase
from rctee.ttp.provisioning import build_partitions, signed_sma
from rctee.ttp.records import DeviceRecord

logger = logging.getLogger(__name__)

DEFAULT_CRP_COUNT = 1024
DEFAULT_STABILITY_CHECKS = 16

_CRP_LABEL = b"RCTEE-CRP-V1"


@dataclass(frozen=True)
class DeviceEnrollment:
    """What the TTP hands to the CSP for a newly enrolled device."""

    image: BootableImage
    record: DeviceRecord
    sma_artifact: bytes
    sma_signature: bytes


@dataclass(frozen=True)
class Credential:
    """The session challenge C and H(R(C) || #DI)."""

    challenge: Challenge
    digest: Digest


class TrustedThirdParty:
    """
    Enrollment authority and verifier.

    Parameters
    ----------
    database : TtpDatabase, default=None
        A new empty database with a fresh TTP key when None.
    crp_count : int, default=1024
        CRPs enrolled per device.
    stability_checks : int, default=16
        Extra evaluations a candidate challenge must survive unchanged during
        enrollment.
    random_state : int, RandomState instance or None
        Source of device keys, nonces and enrollment noise.
    **puf_params :
        Forwarded to :func:`rctee.puf.instantiate` when modelling a device PUF.
    """

    def __init__(
        self,
        database: Optional[TtpDatabase] = None,
        crp_count: int = DEFAULT_CRP_COUNT,
        stability_checks: int = DEFAULT_STABILITY_CHECKS,
        random_state: RandomState = None,
        **puf_params,
    ) -> None:
        self.database = database if database is not None else TtpDatabase()
        self.crp_count = crp_count
        self.stability_checks = stability_checks
        self.puf_params = puf_params
        self._rng = check_random_state(random_state)
        self._dh_secret = dh_from_sign(self.keys).secret

    @property
    def keys(self) -> SignKeyPair:
        return self.database.keys

    @property
    def public_key(self) -> bytes:
        """PK_TTP."""
        return self.keys.public

    def enroll_device(
        self,
        csp_id: bytes,
        board_version: bytes,
        device_seed: bytes,
        pcap_direct_access: bool = False,
    ) -> DeviceEnrollment:
        """
        Enrolls a device and builds its bootable image.

        Generates #DI, the BBRAM key and (SK_TA, PK_TA), enrolls CRPs from the PUF
        of ``device_seed``, signs the SMA with SK_TA, packages the seven partitions
        and stores the golden measurements.

        Parameters
        ----------
        csp_id : bytes
        board_version : bytes
        device_seed : bytes
            32-byte manufacturing seed of the device.
        pcap_direct_access : bool, default=False
            Ship the standard PMU firmware instead of the PCAP-disabling one.

        Raises
        ------
        RcteeError
            DUPLICATE_DEVICE when the device is already enrolled.
        """
        device_seed = _check_length(device_seed, KEY_SIZE, "device_seed")
        device_id = device_id_from_seed(device_seed)
        if self.database.has_device(device_id):
            raise RcteeError(
                ErrorCode.DUPLICATE_DEVICE, f"device {device_id.hex()} already enrolled"
            )

        bbram_key = SymmetricKey(self._rng.bytes(KEY_SIZE), b"bbram")
        ta_keys = sign_keygen(self._rng.bytes(KEY_SIZE))

        model = instantiate(device_seed, **self.puf_params)
        challenges = Drbg(_CRP_LABEL + device_seed + self._rng.bytes(KEY_SIZE))
        crps = enroll_crps(
            model,
            self.crp_count,
            challenges,
            random_state=self._rng,
            stability_checks=self.stability_checks,
        )

        artifact, signature = signed_sma(self.public_key, ta_keys.secret)
        partitions = build_partitions(
            bytes(board_version),
            ta_keys.public,
            artifact,
            signature,
            pcap_direct_access=pcap_direct_access,
        )
        image = package(partitions, bbram_key, self._rng.bytes)

        record = DeviceRecord(
            device_id,
            bytes(csp_id),
            bytes(board_version),
            bbram_key,
            ta_keys,
            crps,
            golden_measurements(partitions),
        )
        self.database.add_device(record)
        logger.info("enrolled device %s with %d CRPs", device_id.hex(), len(crps))
        return DeviceEnrollment(image, record, artifact, signature)

    def enroll_user(self, pk_user: bytes) -> Tuple[Certificate, bytes, bytes]:
        """
        Registers a user public key.

        Returns
        -------
        cert : Certificate
            Ca(PK_USER), the TTP signature over #UID || PK_USER.
        uid : bytes
        pk_ttp : bytes

        Raises
        ------
        RcteeError
            BAD_KEY for a key that is not a valid 32-byte Ed25519 encoding.
        """
        if len(pk_user) != PUBLIC_KEY_SIZE:
            raise RcteeError(ErrorCode.BAD_KEY, "PK_USER must be 32 bytes")
        try:
            dh_public_from_sign_public(pk_user)
        except RcteeError:
            raise RcteeError(
                ErrorCode.BAD_KEY, "PK_USER is not a curve point"
            ) from None

        uid = self.database.register_user(bytes(pk_user)).uid
        logger.info("enrolled user %s", uid.hex())
        return issue_certificate(self.keys, uid, pk_user), uid, self.public_key

    def verify_attestation(
        self, delta: bytes, epsilon: bytes
    ) -> Tuple[Certificate, Credential]:
        """
        Verifies a secure boot report and issues the device credential.

        Parameters
        ----------
        delta : bytes
            Signature of alpha under SK_DEV.
        epsilon : bytes
            #DI || alpha || PK_DEV sealed to PK_TTP.

        Returns
        -------
        cert_dev : Certificate
            Ca(PK_DEV), the TTP signature over #DI || PK_DEV.
        credential : Credential
            The first unconsumed CRP's challenge and H(R || #DI); the CRP is
            consumed.

        Raises
        ------
        RcteeError
            DECRYPT_FAIL, UNKNOWN_DEVICE, MEASUREMENT_MISMATCH, BAD_REPORT,
            CRP_EXHAUSTED.
        """
        try:
            opened = pke_open(self._dh_secret, epsilon)
            envelope = AttestationEnvelope.from_bytes(opened)
        except RcteeError:
            logger.warning("attestation envelope does not open")
            raise RcteeError(
                ErrorCode.DECRYPT_FAIL, "epsilon does not decrypt"
            ) from None

        record = self.database.device(envelope.device_id)
        expected = attestation_hash(record.golden.h_boot(), record.device_id)
        if envelope.alpha != expected:
            logger.warning("device %s boot measurements differ", record.device_id.hex())
            raise RcteeError(
                ErrorCode.MEASUREMENT_MISMATCH, "alpha differs from the golden value"
            )
        if not verify(envelope.pk_dev, envelope.alpha, delta):
            logger.warning("device %s sent an invalid report", record.device_id.hex())
            raise RcteeError(ErrorCode.BAD_REPORT, "delta does not verify under PK_DEV")

        with record.lock:
            index = record.crps.next_unconsumed()
            record.crps.consume(index)
            challenge, response = record.crps.entry(index)

        logger.info("CRP %d of device %s consumed", index, record.device_id.hex())
        cert_dev = issue_certificate(self.keys, record.device_id, envelope.pk_dev)
        digest = credential_digest(response, record.device_id)
        return cert_dev, Credential(challenge, digest)

    def crp_ledger_status(self, device_id: bytes) -> Tuple[int, int]:
        """(total, consumed) CRPs of a device. UNKNOWN_DEVICE if not enrolled."""
        record = self.database.device(device_id)
        with record.lock:
            return record.crps.status()

    def ledger(self) -> pd.DataFrame:
        """One row per enrolled device with its CRP counts."""
        rows = []
        for record in self.database.devices():
            total, consumed = self.crp_ledger_status(record.device_id)
            rows.append(
                {
                    "device_id": record.device_id.hex(),
                    "csp_id": record.csp_id.decode("utf-8", "replace"),
                    "board_version": record.board_version.decode("utf-8", "replace"),
                    "crps_total": total,
                    "crps_consumed": consumed,
                    "crps_free": total - consumed,
                }
            )
        columns = [
            "device_id",
            "csp_id",
            "board_version",
            "crps_total",
            "crps_consumed",
            "crps_free",
        ]
        return pd.DataFrame(rows, columns=columns)
