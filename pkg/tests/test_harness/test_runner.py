import pandas as pd
import pytest

from rctee.errors import ErrorCode, RcteeError
from rctee.harness import (
    REPORT_COLUMNS,
    authentication_trials,
    check_report,
    format_report,
    run_attack,
    run_happy_path,
    run_suite,
    write_report,
)


def test_happy_path():
    steps = run_happy_path(seed=0)

    assert steps["step"].tolist() == [
        "enroll_device",
        "boot",
        "enroll_user",
        "attest",
        "ping",
        "deploy",
        "invoke adder",
        "invoke lenet",
        "ledger",
    ]
    assert steps.loc[1, "detail"].endswith("ros_up")
    assert steps.loc[6, "detail"] == "add32(2, 3) = 5"
    assert steps.loc[7, "detail"] == "10 logits"


def test_suite_is_deterministic():
    names = ["RA-2", "FIA-FLIP", "KPA", "BOOT-TAMPER"]

    first = run_suite(names, seed=0)
    second = run_suite(names, seed=0)

    assert list(first.columns) == REPORT_COLUMNS
    assert format_report(first) == format_report(second)
    assert first["result"].tolist() == ["PASS"] * 4
    check_report(first)


def test_run_attack_by_name():
    assert run_attack("uafr") == "PROT_VIOLATION"


def test_check_report_names_failures():
    report = pd.DataFrame(
        [
            ["A", "OK", "OK", "PASS"],
            ["B", "OK", "AUTH_FAIL", "FAIL"],
            ["C", "OK", "SIG_MISMATCH", "FAIL"],
        ],
        columns=REPORT_COLUMNS,
    )

    with pytest.raises(RcteeError) as record:
        check_report(report)
    assert record.value.code is ErrorCode.VERDICT_MISMATCH
    assert record.value.detail == "B, C"


def test_report_format(tmp_path):
    report = pd.DataFrame([["KPA", "NO_PLAINTEXT", "NO_PLAINTEXT", "PASS"]])
    report.columns = REPORT_COLUMNS
    path = tmp_path / "report.tsv"

    write_report(report, str(path))

    expected = (
        "scenario\tverdict\texpected\tresult\n"
        "KPA\tNO_PLAINTEXT\tNO_PLAINTEXT\tPASS\n"
    )
    assert format_report(report) == expected
    assert path.read_bytes() == expected.encode("utf-8")


def test_authentication_trials():
    trials = authentication_trials(n_trials=4, seed=0)

    assert trials["device"].tolist() == ["genuine", "emulated"]
    assert trials["passed"].tolist() == [4, 0]
    genuine, emulated = trials.to_dict("records")
    assert genuine["pass_rate"] == 1.0
    assert genuine["ci_low"] < 1.0
    assert genuine["ci_high"] == pytest.approx(1.0)
    assert emulated["ci_low"] == pytest.approx(0.0)
    assert emulated["ci_high"] > 0.0
