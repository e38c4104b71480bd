import pytest

from rctee.config import describe, load_settings
from rctee.errors import ErrorCode, RcteeError


def test_defaults():
    settings = load_settings(environ={})

    assert settings.ttp.listen == ("127.0.0.1", 7400)
    assert settings.device.proxy_listen == ("127.0.0.1", 7401)
    assert settings.device.control_listen == ("127.0.0.1", 7402)
    assert settings.client.ttp == settings.ttp.listen
    assert settings.client.device == settings.device.proxy_listen
    assert settings.device.device_seed is None
    assert describe(settings) == (
        "ttp=127.0.0.1:7400 proxy=127.0.0.1:7401 control=127.0.0.1:7402"
    )


def test_file_and_environment(tmp_path):
    path = tmp_path / "rctee.ini"
    path.write_text(
        "[ttp]\n"
        "listen = 0.0.0.0:9000\n"
        "crp_count = 64\n"
        "[device]\n"
        "device_seed = " + "ab" * 32 + "\n"
        "noise_seed = 5\n"
        "[client]\n"
        "home = " + str(tmp_path / "home") + "\n"
    )

    settings = load_settings(str(path), environ={"RCTEE_PROXY_PORT": "9100"})

    assert settings.ttp.listen == ("0.0.0.0", 9000)
    assert settings.ttp.crp_count == 64
    assert settings.device.proxy_listen == ("127.0.0.1", 9100)
    assert settings.device.device_seed == bytes.fromhex("ab" * 32)
    assert settings.device.noise_seed == 5
    assert settings.client.home == str(tmp_path / "home")


def test_environment_wins_over_file(tmp_path):
    path = tmp_path / "rctee.ini"
    path.write_text("[ttp]\nlisten = 127.0.0.1:9000\n")

    settings = load_settings(str(path), environ={"RCTEE_TTP_PORT": "9001"})

    assert settings.ttp.listen == ("127.0.0.1", 9001)


def test_invalid_values(tmp_path):
    with pytest.raises(RcteeError) as record:
        load_settings(environ={"RCTEE_TTP_PORT": "http"})
    assert record.value.code is ErrorCode.BAD_PARAMS

    path = tmp_path / "bad.ini"
    path.write_text("[ttp]\ncrp_count = many\n")
    with pytest.raises(RcteeError):
        load_settings(str(path), environ={})

    with pytest.raises(RcteeError):
        load_settings(str(tmp_path / "missing.ini"), environ={})
