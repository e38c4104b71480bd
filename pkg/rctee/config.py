"""
Settings of the command-line tools, read from an INI file.

Every value has a module-level default, so a file is optional. Ports may also
be overridden with the RCTEE_TTP_PORT, RCTEE_PROXY_PORT and RCTEE_CONTROL_PORT
environment variables, which win over the file.
"""

import configparser
import os
from dataclasses import dataclass
from typing import Mapping, Optional

from rctee.errors import ErrorCode, RcteeError
from rctee.ttp import DEFAULT_CRP_COUNT, DEFAULT_STABILITY_CHECKS
from rctee.wire import Address, format_address, parse_address

DEFAULT_TTP_ADDRESS = "127.0.0.1:7400"
DEFAULT_PROXY_ADDRESS = "127.0.0.1:7401"
DEFAULT_CONTROL_ADDRESS = "127.0.0.1:7402"
DEFAULT_TTP_DATABASE = "ttp.rctd"
DEFAULT_CLIENT_HOME = os.path.join("~", ".rctee")

PORT_VARIABLES = {
    "ttp": "RCTEE_TTP_PORT",
    "proxy": "RCTEE_PROXY_PORT",
    "control": "RCTEE_CONTROL_PORT",
}


@dataclass
class TtpSettings:
    listen: Address
    database: str = DEFAULT_TTP_DATABASE
    crp_count: int = DEFAULT_CRP_COUNT
    crp_stability_checks: int = DEFAULT_STABILITY_CHECKS


@dataclass
class DeviceSettings:
    proxy_listen: Address
    control_listen: Address
    image: Optional[str] = None
    device_seed: Optional[bytes] = None
    noise_seed: Optional[int] = None


@dataclass
class ClientSettings:
    ttp: Address
    device: Address
    home: str = DEFAULT_CLIENT_HOME


@dataclass
class Settings:
    ttp: TtpSettings
    device: DeviceSettings
    client: ClientSettings


def _with_port(address: Address, variable: str, environ: Mapping[str, str]) -> Address:
    value = environ.get(variable)
    if value is None:
        return address
    try:
        port = int(value)
    except ValueError:
        raise RcteeError(
            ErrorCode.BAD_PARAMS, f"{variable} must be a port number. Got {value!r}."
        ) from None
    return address[0], port


def load_settings(
    path: Optional[str] = None, environ: Optional[Mapping[str, str]] = None
) -> Settings:
    """
    Reads ``path`` (if given) over the defaults, then applies the port
    environment variables.

    Raises
    ------
    RcteeError
        BAD_PARAMS for an unreadable file or an invalid value.
    """
    environ = os.environ if environ is None else environ
    parser = configparser.ConfigParser()
    parser.read_dict(
        {
            "ttp": {
                "listen": DEFAULT_TTP_ADDRESS,
                "database": DEFAULT_TTP_DATABASE,
                "crp_count": str(DEFAULT_CRP_COUNT),
                "crp_stability_checks": str(DEFAULT_STABILITY_CHECKS),
            },
            "device": {
                "proxy_listen": DEFAULT_PROXY_ADDRESS,
                "control_listen": DEFAULT_CONTROL_ADDRESS,
            },
            "client": {"home": DEFAULT_CLIENT_HOME},
        }
    )
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                parser.read_file(handle)
        except (OSError, configparser.Error) as error:
            raise RcteeError(
                ErrorCode.BAD_PARAMS, f"cannot read {path}: {error}"
            ) from None

    try:
        ttp = TtpSettings(
            listen=_with_port(
                parse_address(parser["ttp"]["listen"]), PORT_VARIABLES["ttp"], environ
            ),
            database=parser["ttp"]["database"],
            crp_count=parser["ttp"].getint("crp_count"),
            crp_stability_checks=parser["ttp"].getint("crp_stability_checks"),
        )
        section = parser["device"]
        device = DeviceSettings(
            proxy_listen=_with_port(
                parse_address(section["proxy_listen"]), PORT_VARIABLES["proxy"], environ
            ),
            control_listen=_with_port(
                parse_address(section["control_listen"]),
                PORT_VARIABLES["control"],
                environ,
            ),
            image=section.get("image"),
            device_seed=(
                bytes.fromhex(section["device_seed"])
                if "device_seed" in section
                else None
            ),
            noise_seed=section.getint("noise_seed", fallback=None),
        )
    except ValueError as error:
        raise RcteeError(ErrorCode.BAD_PARAMS, str(error)) from None

    client_section = parser["client"]
    client = ClientSettings(
        ttp=(
            parse_address(client_section["ttp"])
            if "ttp" in client_section
            else ttp.listen
        ),
        device=(
            parse_address(client_section["device"])
            if "device" in client_section
            else device.proxy_listen
        ),
        home=os.path.expanduser(client_section["home"]),
    )
    return Settings(ttp, device, client)


def describe(settings: Settings) -> str:
    return (
        f"ttp={format_address(settings.ttp.listen)} "
        f"proxy={format_address(settings.device.proxy_listen)} "
        f"control={format_address(settings.device.control_listen)}"
    )
