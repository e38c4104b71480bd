from rctee.cli.common import EXIT_OK, EXIT_REJECTED
from rctee.cli.harness import main


def test_run_writes_the_report(tmp_path):
    path = tmp_path / "report.tsv"

    status = main(["run", "--scenario", "RA-2", "--seed", "0", "--report", str(path)])

    assert status == EXIT_OK
    lines = path.read_text().splitlines()
    assert lines[0] == "scenario\tverdict\texpected\tresult"
    assert len(lines) == 2
    assert lines[1].startswith("RA-2\t")
    assert lines[1].endswith("\tPASS")


def test_run_prints_the_report(capsys):
    assert main(["run", "--scenario", "KPA"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("scenario\tverdict")


def test_unknown_scenario():
    assert main(["run", "--scenario", "NOPE"]) == EXIT_REJECTED
