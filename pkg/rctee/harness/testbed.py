"""In-process deployment of one TTP, one device and its users, wired through
interceptable connections."""

import logging
import struct
from typing import Optional

from rctee.client import UserClient, expect_reply
from rctee.crypto import KEY_SIZE, drbg, sign_keygen
from rctee.device import FpgaSoc
from rctee.errors import ErrorCode
from rctee.harness.interceptor import Interceptor, Wiretap
from rctee.host import DeviceHost
from rctee.puf import instantiate
from rctee.ttp import TrustedThirdParty, TtpDatabase, TtpServer
from rctee.wire import (
    ControlAck,
    LocalConnection,
    Message,
    PowerOff,
    PowerOn,
    message_handler,
)

logger = logging.getLogger(__name__)

HARNESS_CRP_COUNT = 32
HARNESS_STABILITY_CHECKS = 16
CSP_ID = b"csp-harness"
BOARD_VERSION = b"zcu102-rev1"


class Testbed:
    """
    A TTP, an enrolled device and its proxy, built deterministically from
    ``seed``.

    The adversary controls every connection handed out by :meth:`device_link`
    and :meth:`ttp_link` and may drive the harness control endpoint, but does not
    reach into the TEE. Physical attacks (BBRAM, flash) go through :attr:`soc`.

    Parameters
    ----------
    seed : int, default=0
    crp_count : int, default=32
    pcap_direct_access : bool, default=False
        Enroll the device with the standard PMU firmware.
    puf_seed : bytes, default=None
        Give the served device the PUF of another seed: a clone carrying the
        genuine identity and image but not the genuine PUF.
    boot : bool, default=True
        Power the device on and start the SMA.
    """

    def __init__(
        self,
        seed: int = 0,
        crp_count: int = HARNESS_CRP_COUNT,
        pcap_direct_access: bool = False,
        puf_seed: Optional[bytes] = None,
        boot: bool = True,
        **puf_params,
    ) -> None:
        self.seed = seed
        self._source = drbg(b"RCTEE-HARNESS-V1" + struct.pack(">Q", seed))
        self.tap = Wiretap()

        database = TtpDatabase(sign_keygen(self.random_bytes()))
        self.ttp = TrustedThirdParty(
            database,
            crp_count=crp_count,
            stability_checks=HARNESS_STABILITY_CHECKS,
            random_state=seed,
            **puf_params,
        )
        self.ttp_server = TtpServer(self.ttp)

        self.device_seed = self.random_bytes()
        self.enrollment = self.ttp.enroll_device(
            CSP_ID, BOARD_VERSION, self.device_seed, pcap_direct_access
        )
        puf = instantiate(puf_seed, **puf_params) if puf_seed is not None else None
        self.soc = FpgaSoc(
            self.device_seed, puf=puf, random_state=seed + 1, **puf_params
        )
        self.soc.program_bbram(self.enrollment.record.bbram_key)
        self.soc.flash(self.enrollment.image)
        self.host = DeviceHost(self.soc)
        if boot:
            self.power_on()

    def random_bytes(self, n: int = KEY_SIZE) -> bytes:
        return self._source(n)

    @property
    def device_id(self) -> bytes:
        return self.enrollment.record.device_id

    def device_link(self) -> Interceptor:
        return Interceptor(
            LocalConnection(self.host.proxy.handle_frame), "device", self.tap
        )

    def ttp_link(self) -> Interceptor:
        return Interceptor(
            LocalConnection(message_handler(self.ttp_server.handle)), "ttp", self.tap
        )

    def control(self, message: Message) -> Message:
        connection = LocalConnection(message_handler(self.host.handle_control))
        return connection.request(message)

    def power_on(self) -> ErrorCode:
        """Boots through the control endpoint and returns the boot status."""
        return ErrorCode(expect_reply(self.control(PowerOn()), ControlAck).status)

    def reboot(self) -> ErrorCode:
        self.control(PowerOff())
        return self.power_on()

    def user(self, name: str = "user") -> UserClient:
        """Enrolls a user whose key is derived from the world seed and ``name``."""
        seed = drbg(self.random_bytes() + name.encode("utf-8"))(KEY_SIZE)
        return UserClient.enroll(self.ttp_link(), seed=seed)
