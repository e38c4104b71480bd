import pytest

from rctee.crypto import dh_public_from_sign_public, pke_seal, sign, sign_keygen
from rctee.protocol import AttestationEnvelope, attestation_hash
from rctee.ttp import TrustedThirdParty, TtpDatabase


@pytest.fixture
def crp_count():
    return 60


@pytest.fixture
def ttp(ttp_keys, crp_count):
    return TrustedThirdParty(
        TtpDatabase(ttp_keys), crp_count=crp_count, stability_checks=4, random_state=0
    )


@pytest.fixture
def enrollment(ttp, device_seed):
    return ttp.enroll_device(b"csp-1", b"board-a", device_seed)


@pytest.fixture
def make_report(ttp, enrollment):
    """Builds (delta, epsilon) as a device would, with overridable fields."""

    def report(device_id=None, alpha=None, signer=None, keys=None):
        record = enrollment.record
        device_id = record.device_id if device_id is None else device_id
        if alpha is None:
            alpha = attestation_hash(record.golden.h_boot(), record.device_id)
        keys = keys or sign_keygen(b"\x05" * 32)
        delta = sign((signer or keys).secret, alpha)
        envelope = AttestationEnvelope(device_id, alpha, keys.public)
        epsilon = pke_seal(
            dh_public_from_sign_public(ttp.public_key), envelope.to_bytes()
        )
        return delta, epsilon

    return report
