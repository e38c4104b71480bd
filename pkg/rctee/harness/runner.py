"""Happy path, attack suite and authentication trials."""

import logging
import struct
from typing import Iterable, List, Optional, Union

import pandas as pd
from statsmodels.stats.proportion import proportion_confint

from rctee.errors import ErrorCode, RcteeError
from rctee.harness.scenarios import (
    CLONE_PUF_SEED,
    DESIGN,
    SCENARIOS,
    Scenario,
    attested,
    scenario,
)
from rctee.harness.testbed import Testbed

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["scenario", "verdict", "expected", "result"]
PASS = "PASS"
FAIL = "FAIL"

LENET_INPUT = bytes(range(256)) * 3 + bytes(16)


def run_happy_path(seed: int = 0) -> pd.DataFrame:
    """
    Runs every protocol step once against a fresh testbed.

    Enrollment of device and user, boot, attestation, a sealed ping, deployment
    of the adder and LeNet design and one call of each IP.

    Returns
    -------
    steps : pandas.DataFrame
        Columns ``step`` and ``detail``, one row per completed step.

    Raises
    ------
    RcteeError
        Any protocol error; VERDICT_MISMATCH when the adder does not return 5
        or the TTP did not consume exactly one CRP.
    """
    steps: List[dict] = []

    def done(step: str, detail: str) -> None:
        logger.info("happy path: %s (%s)", step, detail)
        steps.append({"step": step, "detail": detail})

    testbed = Testbed(seed)
    total, consumed_before = testbed.ttp.crp_ledger_status(testbed.device_id)
    done("enroll_device", f"{total} CRPs")
    done("boot", " > ".join(testbed.soc.stages_reached))

    party = attested(testbed)
    done("enroll_user", party.client.identity.uid.hex())
    done("attest", f"device {party.session.device_id.hex()}")

    party.client.ping(party.device, party.session)
    done("ping", "session keys match")

    party.client.deploy_manifest(party.device, party.session, DESIGN)
    done("deploy", ", ".join(DESIGN.ips))

    operands = [struct.pack(">I", 2), struct.pack(">I", 3)]
    (total_word,) = party.client.invoke(
        party.device, party.session, "adder", operands
    )
    result = struct.unpack(">I", total_word)[0]
    if result != 5:
        raise RcteeError(ErrorCode.VERDICT_MISMATCH, f"add32(2, 3) returned {result}")
    done("invoke adder", "add32(2, 3) = 5")

    (logits,) = party.client.invoke(party.device, party.session, "lenet", [LENET_INPUT])
    done("invoke lenet", f"{len(logits)} logits")

    _, consumed_after = testbed.ttp.crp_ledger_status(testbed.device_id)
    if consumed_after != consumed_before + 1:
        raise RcteeError(
            ErrorCode.VERDICT_MISMATCH,
            f"{consumed_after - consumed_before} CRPs consumed by one attestation",
        )
    done("ledger", f"{consumed_after} of {total} CRPs consumed")
    return pd.DataFrame(steps, columns=["step", "detail"])


def run_attack(attack: Union[str, Scenario], seed: int = 0) -> str:
    """Plays one scenario and returns its verdict."""
    chosen = scenario(attack) if isinstance(attack, str) else attack
    verdict = chosen.run(seed)
    log = logger.info if verdict == chosen.expected else logger.error
    log("%s: %s (expected %s)", chosen.name, verdict, chosen.expected)
    return verdict


def run_suite(
    names: Optional[Iterable[str]] = None, seed: int = 0
) -> pd.DataFrame:
    """
    Plays scenarios in order and tabulates verdicts.

    Parameters
    ----------
    names : iterable of str, default=None
        All scenarios when None.
    seed : int, default=0

    Returns
    -------
    report : pandas.DataFrame
        Columns ``scenario``, ``verdict``, ``expected`` and ``result``.
    """
    chosen = SCENARIOS if names is None else tuple(scenario(n) for n in names)
    rows = []
    for item in chosen:
        verdict = run_attack(item, seed)
        rows.append(
            {
                "scenario": item.name,
                "verdict": verdict,
                "expected": item.expected,
                "result": PASS if verdict == item.expected else FAIL,
            }
        )
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def check_report(report: pd.DataFrame) -> None:
    """
    Raises
    ------
    RcteeError
        VERDICT_MISMATCH naming every failed scenario.
    """
    failed = report.loc[report["result"] != PASS, "scenario"].tolist()
    if failed:
        raise RcteeError(ErrorCode.VERDICT_MISMATCH, ", ".join(failed))


def format_report(report: pd.DataFrame) -> str:
    """Tab-separated, one line per row, header first."""
    lines = ["\t".join(report.columns)]
    lines += ["\t".join(str(v) for v in row) for row in report.itertuples(index=False)]
    return "\n".join(lines) + "\n"


def write_report(report: pd.DataFrame, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(format_report(report))


def _trial_row(device: str, passed: int, trials: int) -> dict:
    low, high = proportion_confint(passed, trials, alpha=0.05, method="wilson")
    return {
        "device": device,
        "trials": trials,
        "passed": passed,
        "pass_rate": passed / trials,
        "ci_low": float(low),
        "ci_high": float(high),
    }


def authentication_trials(n_trials: int = 100, seed: int = 0) -> pd.DataFrame:
    """
    Attests the genuine device and a PUF-less clone ``n_trials`` times each.

    Every trial is a full attestation with a fresh CRP. A trial passes when the
    client accepts the device.

    Returns
    -------
    trials : pandas.DataFrame
        One row per device kind with the pass rate and its 95% Wilson interval.
    """
    rows = []
    for device, options in (
        ("genuine", {}),
        ("emulated", {"puf_seed": CLONE_PUF_SEED}),
    ):
        testbed = Testbed(seed, crp_count=n_trials, **options)
        client = testbed.user()
        passed = 0
        for _ in range(n_trials):
            try:
                client.attest(testbed.device_link(), testbed.ttp_link())
            except RcteeError as error:
                if error.code is not ErrorCode.DEVICE_AUTH_FAIL:
                    raise
            else:
                passed += 1
        rows.append(_trial_row(device, passed, n_trials))
        logger.info("%s device passed %d of %d trials", device, passed, n_trials)
    return pd.DataFrame(rows)
