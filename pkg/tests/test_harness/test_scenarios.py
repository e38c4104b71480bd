import numpy as np
import pytest

from rctee.errors import ErrorCode, RcteeError
from rctee.harness import (
    DESIGN,
    SCENARIOS,
    flip_payload_byte,
    scenario,
    verdict_of,
)
from rctee.harness.scenarios import attested
from rctee.wire import DeployData


@pytest.mark.parametrize("item", SCENARIOS, ids=[s.name for s in SCENARIOS])
def test_scenario_verdicts(item):
    assert item.run(seed=0) == item.expected


def test_scenario_names_are_unique():
    names = [item.name for item in SCENARIOS]
    assert len(names) == len(set(names)) == 14


def test_scenario_lookup():
    assert scenario("ra-1") is SCENARIOS[0]

    with pytest.raises(RcteeError) as record:
        scenario("SPECTRE")
    assert record.value.code is ErrorCode.BAD_PARAMS


def test_verdict_of():
    rejected = RcteeError(
        ErrorCode.TTP_REJECTED, "", reason=ErrorCode.MEASUREMENT_MISMATCH
    )

    assert verdict_of(rejected) == "MEASUREMENT_MISMATCH"
    assert verdict_of(RcteeError(ErrorCode.TTP_REJECTED)) == "TTP_REJECTED"
    assert verdict_of(RcteeError(ErrorCode.AUTH_FAIL)) == "AUTH_FAIL"


def test_any_flipped_ciphertext_byte_is_refused(testbed):
    party = attested(testbed)
    enc_bin, _ = party.client.prepare_bitstream(party.session, DESIGN)
    assert len(enc_bin) >= 4096

    offsets = np.linspace(1, len(enc_bin), num=12, dtype=int)
    for counter, offset in enumerate(offsets, start=1):
        party.device.clear_hooks()
        party.device.on_send(flip_payload_byte(DeployData, -int(offset)))

        with pytest.raises(RcteeError) as record:
            party.client.deploy_manifest(party.device, party.session, DESIGN)
        assert record.value.code is ErrorCode.SIG_MISMATCH
        assert party.session.deploy_counter == counter

    party.device.clear_hooks()
    status = party.client.deploy_manifest(party.device, party.session, DESIGN)
    assert status is ErrorCode.OK
