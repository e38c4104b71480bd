import pandas as pd
import pytest

from rctee.crypto import hash_data, sign_keygen, verify_certificate
from rctee.device import FpgaSoc, device_id_from_seed
from rctee.errors import ErrorCode, RcteeError
from rctee.image import unpack_and_measure
from rctee.protocol import credential_digest, sma_artifact_ttp_key
from rctee.sma import launch_sma


def test_enroll_device(ttp, enrollment, device_seed, puf_model):
    record = enrollment.record

    assert record.device_id == device_id_from_seed(device_seed)
    assert ttp.database.has_device(record.device_id)
    assert ttp.crp_ledger_status(record.device_id) == (60, 0)
    assert sma_artifact_ttp_key(enrollment.sma_artifact) == ttp.public_key

    _, measurements = unpack_and_measure(enrollment.image, record.bbram_key)
    assert measurements.h_boot() == record.golden.h_boot()

    # enrolled responses are the noiseless comparisons of the device's PUF
    challenge, response = record.crps.entry(0)
    freqs = puf_model.frequencies_
    assert response.bits == tuple(int(freqs[i] > freqs[j]) for i, j in challenge.pairs)


def test_enroll_device_twice(ttp, enrollment, device_seed):
    with pytest.raises(RcteeError) as record:
        ttp.enroll_device(b"csp-2", b"board-b", device_seed)
    assert record.value.code is ErrorCode.DUPLICATE_DEVICE


def test_enroll_user(ttp):
    keys = sign_keygen(b"\x03" * 32)

    cert, uid, pk_ttp = ttp.enroll_user(keys.public)

    assert pk_ttp == ttp.public_key
    assert cert.subject_id == uid
    assert cert.subject_public == keys.public
    assert verify_certificate(cert, ttp.public_key)
    assert ttp.database.user(uid).pk_user == keys.public

    # the same key enrolled again gets a new identifier
    assert ttp.enroll_user(keys.public)[1] != uid


@pytest.mark.parametrize(
    "public", [b"\x00" * 31, b"\x01" + b"\x00" * 31, b"\xff" * 31 + b"\x7f"]
)
def test_enroll_user_rejects_bad_keys(ttp, public):
    with pytest.raises(RcteeError) as record:
        ttp.enroll_user(public)
    assert record.value.code is ErrorCode.BAD_KEY


def test_verify_attestation(ttp, enrollment, make_report):
    keys = sign_keygen(b"\x06" * 32)
    device_id = enrollment.record.device_id

    cert_dev, credential = ttp.verify_attestation(*make_report(keys=keys))

    challenge, response = enrollment.record.crps.entry(0)
    assert cert_dev.subject_id == device_id
    assert cert_dev.subject_public == keys.public
    assert verify_certificate(cert_dev, ttp.public_key)
    assert credential.challenge == challenge
    assert credential.digest == credential_digest(response, device_id)
    assert ttp.crp_ledger_status(device_id) == (60, 1)


def test_each_attestation_consumes_one_crp(ttp, enrollment, make_report):
    device_id = enrollment.record.device_id

    credentials = [ttp.verify_attestation(*make_report())[1] for _ in range(50)]
    challenges = {credential.challenge for credential in credentials}

    assert len(challenges) == 50
    assert ttp.crp_ledger_status(device_id) == (60, 50)
    assert enrollment.record.crps.to_frame()["consumed"].sum() == 50


@pytest.mark.parametrize("crp_count", [3])
def test_crps_run_out(ttp, enrollment, make_report):
    for _ in range(3):
        ttp.verify_attestation(*make_report())

    with pytest.raises(RcteeError) as record:
        ttp.verify_attestation(*make_report())
    assert record.value.code is ErrorCode.CRP_EXHAUSTED


def test_rejected_reports_keep_the_ledger(ttp, enrollment, make_report):
    device_id = enrollment.record.device_id
    intruder = sign_keygen(b"\x08" * 32)

    # test case 1: alpha of another boot image
    with pytest.raises(RcteeError) as record:
        ttp.verify_attestation(*make_report(alpha=hash_data(b"other image")))
    assert record.value.code is ErrorCode.MEASUREMENT_MISMATCH

    # test case 2: delta not made with SK_DEV
    with pytest.raises(RcteeError) as record:
        ttp.verify_attestation(*make_report(signer=intruder))
    assert record.value.code is ErrorCode.BAD_REPORT

    # test case 3: device never enrolled
    with pytest.raises(RcteeError) as record:
        ttp.verify_attestation(*make_report(device_id=b"\x09" * 16))
    assert record.value.code is ErrorCode.UNKNOWN_DEVICE

    # test case 4: epsilon damaged in transit
    delta, epsilon = make_report()
    damaged = epsilon[:-1] + bytes([epsilon[-1] ^ 1])
    for bad in (damaged, b"", b"\x00" * 200):
        with pytest.raises(RcteeError) as record:
            ttp.verify_attestation(delta, bad)
        assert record.value.code is ErrorCode.DECRYPT_FAIL

    assert ttp.crp_ledger_status(device_id) == (60, 0)


def test_genuine_device_answers_the_credential(
    ttp, enrollment, device_seed, user_cert
):
    soc = FpgaSoc(device_seed, random_state=1)
    soc.program_bbram(enrollment.record.bbram_key)
    soc.flash(enrollment.image)
    app = launch_sma(soc.power_on())

    delta, epsilon = app.handle_attest_request(user_cert)
    cert_dev, credential = ttp.verify_attestation(delta, epsilon)

    assert cert_dev.subject_public == app.session.pk_dev
    assert app.handle_challenge(credential.challenge) == credential.digest


def test_ledger(ttp, enrollment, other_device_seed, make_report):
    ttp.enroll_device(b"csp-2", b"board-b", other_device_seed)
    ttp.verify_attestation(*make_report())

    ledger = ttp.ledger()

    assert isinstance(ledger, pd.DataFrame)
    assert list(ledger["csp_id"]) == ["csp-1", "csp-2"]
    assert list(ledger["crps_consumed"]) == [1, 0]
    assert list(ledger["crps_free"]) == [59, 60]
    assert ledger.loc[0, "device_id"] == enrollment.record.device_id.hex()


def test_ledger_of_unknown_device(ttp):
    with pytest.raises(RcteeError) as record:
        ttp.crp_ledger_status(b"\x00" * 16)
    assert record.value.code is ErrorCode.UNKNOWN_DEVICE
