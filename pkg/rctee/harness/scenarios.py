"""
Attack scenarios. Each one builds a fresh :class:`Testbed`, plays the adversary
and returns the observed verdict: ``"OK"``, a boot outcome, a leak marker or the
name of the error code that stopped the attack.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Tuple

from rctee.client import UserClient, manifest_from_ips
from rctee.client.session import DeviceSession
from rctee.crypto import (
    Certificate,
    SymmetricKey,
    hash_data,
    issue_certificate,
    sign,
    sign_keygen,
)
from rctee.device import World
from rctee.errors import ErrorCode, RcteeError
from rctee.harness.interceptor import (
    Interceptor,
    flip_payload_byte,
    rewrite,
    substitute,
)
from rctee.harness.testbed import BOARD_VERSION, Testbed
from rctee.image import PartitionKind, package
from rctee.protocol import build_sma_artifact
from rctee.ttp import build_partitions, signed_sma
from rctee.wire import (
    BusRead,
    DeployData,
    Error,
    InjectTamper,
    Message,
    MessageType,
    PcapData,
    PcapReadback,
    TtpVerifyResponse,
    decode,
)

OK = "OK"
BOOT_FAILED = "BootFailed"
BITSTREAM_READ_BACK = "BITSTREAM_READ_BACK"
NO_PLAINTEXT = "NO_PLAINTEXT"
CANARY_LEAKED = "CANARY_LEAKED"

CANARY = hash_data(b"RCTEE-CANARY-V1")[:32]
CLONE_PUF_SEED = hash_data(b"RCTEE-CLONE-PUF-V1")[:32]

# the design every scenario deploys: one adder and one LeNet stand-in, both secure
DESIGN = manifest_from_ips(
    [("adder", "add32", True, 2, 1), ("lenet", "lenet_stub", True, 1, 1)],
    filler_len=4096,
    seed=b"rctee-harness-design",
    canary=CANARY,
)


def verdict_of(error: RcteeError) -> str:
    """The TTP's own code for TTP_REJECTED, the error code otherwise."""
    if error.code is ErrorCode.TTP_REJECTED and error.reason is not None:
        return error.reason.name
    return error.code.name


def outcome(action: Callable[..., Any], *args: Any) -> str:
    try:
        action(*args)
    except RcteeError as error:
        return verdict_of(error)
    return OK


def reply_verdict(reply: Message) -> str:
    if isinstance(reply, Error):
        try:
            return ErrorCode(reply.code).name
        except ValueError:
            return f"{reply.code:#06x}"
    return OK


@dataclass
class Attested:
    client: UserClient
    device: Interceptor
    ttp: Interceptor
    session: DeviceSession


def attested(testbed: Testbed) -> Attested:
    client = testbed.user()
    device, ttp = testbed.device_link(), testbed.ttp_link()
    return Attested(client, device, ttp, client.attest(device, ttp))


def deployed(testbed: Testbed) -> Attested:
    party = attested(testbed)
    party.client.deploy_manifest(party.device, party.session, DESIGN)
    return party


def _add(party: Attested, a: int, b: int) -> Tuple[bytes, ...]:
    inputs = [a.to_bytes(4, "big"), b.to_bytes(4, "big")]
    return party.client.invoke(party.device, party.session, "adder", inputs)


# ---------------------------------------------------------------------------
# replay
# ---------------------------------------------------------------------------


def replay_challenge_answer(testbed: Testbed) -> str:
    """An answer captured in one session is replayed into the next."""
    party = attested(testbed)
    stale = testbed.tap.last(MessageType.CHALLENGE_ANSWER)
    party.device.on_receive(substitute(MessageType.CHALLENGE_ANSWER, stale))
    return outcome(party.client.attest, party.device, party.ttp)


def replay_invoke_request(testbed: Testbed) -> str:
    party = deployed(testbed)
    _add(party, 2, 3)
    party.device.inject(testbed.tap.last(MessageType.INVOKE_REQUEST))
    return reply_verdict(decode(party.device.receive_raw()))


# ---------------------------------------------------------------------------
# man in the middle
# ---------------------------------------------------------------------------


def forged_device_certificate(testbed: Testbed) -> str:
    """The adversary puts its own key in place of PK_DEV and signs the binding."""
    adversary = sign_keygen(testbed.random_bytes())

    def forge(message: TtpVerifyResponse) -> Message:
        subject = message.cert_dev.subject_id
        cert = issue_certificate(adversary, subject, adversary.public)
        return TtpVerifyResponse(cert, message.challenge, message.credential_digest)

    client = testbed.user()
    ttp = testbed.ttp_link().on_receive(rewrite(TtpVerifyResponse, forge))
    return outcome(client.attest, testbed.device_link(), ttp)


def stale_device_certificate(testbed: Testbed) -> str:
    """A genuine Ca(PK_DEV) from an old session, without the PUF to back it."""
    party = attested(testbed)
    stale_cert: Certificate = party.session.cert_dev
    stale_answer = testbed.tap.last(MessageType.CHALLENGE_ANSWER)

    def swap(message: TtpVerifyResponse) -> Message:
        return TtpVerifyResponse(
            stale_cert, message.challenge, message.credential_digest
        )

    party.ttp.on_receive(rewrite(TtpVerifyResponse, swap))
    party.device.on_receive(substitute(MessageType.CHALLENGE_ANSWER, stale_answer))
    return outcome(party.client.attest, party.device, party.ttp)


# ---------------------------------------------------------------------------
# readback
# ---------------------------------------------------------------------------


def readback(testbed: Testbed) -> str:
    deployed(testbed)
    reply = testbed.control(PcapReadback(World.ROS))
    if isinstance(reply, PcapData) and reply.data == DESIGN.to_bytes():
        return BITSTREAM_READ_BACK
    return reply_verdict(reply)


# ---------------------------------------------------------------------------
# malicious IP injection
# ---------------------------------------------------------------------------


def flipped_bitstream(testbed: Testbed) -> str:
    party = attested(testbed)
    party.device.on_send(flip_payload_byte(DeployData))
    return outcome(party.client.deploy_manifest, party.device, party.session, DESIGN)


def foreign_signature(testbed: Testbed) -> str:
    party = attested(testbed)
    enc_bin, _ = party.client.prepare_bitstream(party.session, DESIGN)
    intruder = sign_keygen(testbed.random_bytes())
    signature = sign(intruder.secret, hash_data(enc_bin))
    return outcome(
        party.client.deploy, party.device, party.session, enc_bin, signature
    )


# ---------------------------------------------------------------------------
# unauthorised access to IP inputs and outputs
# ---------------------------------------------------------------------------


def ros_reads_ip_output(testbed: Testbed) -> str:
    party = deployed(testbed)
    _add(party, 2, 3)
    address = party.session.ip("adder").output_addresses[0]
    return reply_verdict(testbed.control(BusRead(World.ROS, address, 4)))


# ---------------------------------------------------------------------------
# trusted applications and boot
# ---------------------------------------------------------------------------


def rogue_trusted_application(testbed: Testbed) -> str:
    artifact = build_sma_artifact(testbed.ttp.public_key, b"rogue application")
    rogue = sign_keygen(testbed.random_bytes())
    return outcome(testbed.soc.start_ta, artifact, sign(rogue.secret, artifact))


def tampered_partition(
    testbed: Testbed, kind: PartitionKind = PartitionKind.BIT
) -> str:
    testbed.control(InjectTamper(int(kind), 0))
    return OK if testbed.power_on() is ErrorCode.OK else BOOT_FAILED


def rebuilt_image(testbed: Testbed) -> str:
    """
    An insider repackages the image under its own BBRAM key and TA key. The
    device boots; the TTP sees the measurements differ.
    """
    bbram_key = SymmetricKey(testbed.random_bytes(), b"bbram")
    ta_keys = sign_keygen(testbed.random_bytes())
    artifact, signature = signed_sma(testbed.ttp.public_key, ta_keys.secret)
    partitions = build_partitions(BOARD_VERSION, ta_keys.public, artifact, signature)
    testbed.soc.program_bbram(bbram_key)
    testbed.soc.flash(package(partitions, bbram_key, testbed.random_bytes))
    if testbed.power_on() is not ErrorCode.OK:
        return BOOT_FAILED
    client = testbed.user()
    return outcome(client.attest, testbed.device_link(), testbed.ttp_link())


# ---------------------------------------------------------------------------
# extras
# ---------------------------------------------------------------------------


def known_plaintext(testbed: Testbed) -> str:
    """Scans all captured traffic for the canary embedded in the bitstream."""
    party = deployed(testbed)
    _add(party, 2, 3)
    party.client.ping(party.device, party.session)
    return CANARY_LEAKED if testbed.tap.contains(CANARY) else NO_PLAINTEXT


def emulated_device(testbed: Testbed) -> str:
    client = testbed.user()
    return outcome(client.attest, testbed.device_link(), testbed.ttp_link())


@dataclass(frozen=True)
class Scenario:
    """
    One adversarial experiment with a single expected verdict.

    Parameters
    ----------
    name : str
    description : str
    expected : str
    action : callable
        ``action(testbed) -> verdict``.
    testbed_options : dict
        Keyword arguments of :class:`Testbed`.
    """

    name: str
    description: str
    expected: str
    action: Callable[[Testbed], str] = field(repr=False)
    testbed_options: Dict[str, Any] = field(default_factory=dict)

    def run(self, seed: int = 0) -> str:
        return self.action(Testbed(seed, **self.testbed_options))


SCENARIOS: Tuple[Scenario, ...] = (
    Scenario(
        "RA-1",
        "replay of a captured ChallengeAnswer into a new session",
        ErrorCode.DEVICE_AUTH_FAIL.name,
        replay_challenge_answer,
    ),
    Scenario(
        "RA-2",
        "replay of a captured sealed InvokeRequest",
        ErrorCode.AUTH_FAIL.name,
        replay_invoke_request,
    ),
    Scenario(
        "MITM-CERT",
        "adversary key substituted for PK_DEV with a self-made certificate",
        ErrorCode.CERT_INVALID.name,
        forged_device_certificate,
    ),
    Scenario(
        "MITM-STALE",
        "stolen stale Ca(PK_DEV) without the PUF",
        ErrorCode.DEVICE_AUTH_FAIL.name,
        stale_device_certificate,
    ),
    Scenario(
        "RBA-CUSTOM",
        "PCAP readback from the ROS under the custom PMU firmware",
        ErrorCode.PCAP_DISABLED.name,
        readback,
    ),
    Scenario(
        "RBA-STANDARD",
        "PCAP readback from the ROS under the standard PMU firmware",
        BITSTREAM_READ_BACK,
        readback,
        {"pcap_direct_access": True},
    ),
    Scenario(
        "FIA-FLIP",
        "one byte of the encrypted bitstream flipped in transit",
        ErrorCode.SIG_MISMATCH.name,
        flipped_bitstream,
    ),
    Scenario(
        "FIA-FOREIGN-KEY",
        "bitstream signed by a key other than the session user's",
        ErrorCode.SIG_MISMATCH.name,
        foreign_signature,
    ),
    Scenario(
        "UAFR",
        "ROS bus read of a secure IP's output address",
        ErrorCode.PROT_VIOLATION.name,
        ros_reads_ip_output,
    ),
    Scenario(
        "TA",
        "SMA artifact signed by a key other than the TA key",
        ErrorCode.TA_AUTH_FAIL.name,
        rogue_trusted_application,
    ),
    Scenario(
        "BOOT-TAMPER",
        "one byte of the BIT partition flipped in flash",
        BOOT_FAILED,
        tampered_partition,
        {"boot": False},
    ),
    Scenario(
        "BOOT-REBUILT",
        "image rebuilt and re-encrypted under an attacker BBRAM key",
        ErrorCode.MEASUREMENT_MISMATCH.name,
        rebuilt_image,
        {"boot": False},
    ),
    Scenario(
        "KPA",
        "bitstream canary searched in all captured frames",
        NO_PLAINTEXT,
        known_plaintext,
    ),
    Scenario(
        "EMULATED-DEVICE",
        "clone with the genuine image and identity but another PUF",
        ErrorCode.DEVICE_AUTH_FAIL.name,
        emulated_device,
        {"puf_seed": CLONE_PUF_SEED},
    ),
)


def scenario(name: str) -> Scenario:
    """
    Raises
    ------
    RcteeError
        BAD_PARAMS for an unknown name.
    """
    for candidate in SCENARIOS:
        if candidate.name == name.upper():
            return candidate
    names = ", ".join(s.name for s in SCENARIOS)
    raise RcteeError(
        ErrorCode.BAD_PARAMS, f"unknown scenario {name!r}; choose from {names}"
    )
