"""
The device process: one simulated SoC, its SMA, the REE proxy endpoint and the
harness control endpoint.
"""

import logging
from typing import List, Optional

from rctee.device import FpgaSoc
from rctee.errors import ErrorCode, RcteeError
from rctee.image import PartitionKind
from rctee.sma import SmaEndpoint, launch_sma
from rctee.wire import (
    Address,
    BusData,
    BusRead,
    ControlAck,
    Error,
    FrameServer,
    InjectTamper,
    LaunchSma,
    Message,
    PcapData,
    PcapReadback,
    PowerOff,
    PowerOn,
    Proxy,
    SetFirmware,
    StageQuery,
    StageReport,
    message_handler,
)

logger = logging.getLogger(__name__)


class DeviceHost:
    """
    Runs a device and exposes it on two framed endpoints.

    Parameters
    ----------
    soc : FpgaSoc
        A provisioned device (BBRAM key programmed, image flashed).
    auto_launch : bool, default=True
        Start the SMA from the ROS file system after every successful boot.
    """

    def __init__(self, soc: FpgaSoc, auto_launch: bool = True) -> None:
        self.soc = soc
        self.auto_launch = auto_launch
        self.endpoint: Optional[SmaEndpoint] = None
        self.proxy = Proxy(soc, lambda: self.endpoint)
        self._servers: List[FrameServer] = []

    def power_on(self) -> None:
        self.soc.power_on()
        self.endpoint = None
        if self.auto_launch:
            self.launch_sma()

    def power_off(self) -> None:
        self.endpoint = None
        self.soc.power_off()

    def launch_sma(self) -> SmaEndpoint:
        self.endpoint = SmaEndpoint(launch_sma(self.soc))
        return self.endpoint

    def stop_sma(self) -> None:
        """Simulates a crashed or absent SMA."""
        self.endpoint = None

    def handle_control(self, message: Message, state: dict) -> List[Message]:
        """Executes one harness control message."""
        actions = {
            PowerOn: lambda m: self.power_on(),
            PowerOff: lambda m: self.power_off(),
            InjectTamper: lambda m: self.soc.inject_tamper(
                _partition_kind(m.partition), m.offset
            ),
            SetFirmware: lambda m: self.soc.set_firmware(m.pcap_direct_access),
            LaunchSma: lambda m: self.launch_sma(),
        }
        action = actions.get(type(message))
        if action is not None:
            try:
                action(message)
            except RcteeError as error:
                return [ControlAck(int(error.code), error.detail)]
            return [ControlAck(int(ErrorCode.OK))]

        try:
            if isinstance(message, StageQuery):
                stages = tuple(self.soc.stages_reached)
                return [StageReport(stages, self.soc.ocm_slot())]
            if isinstance(message, PcapReadback):
                return [PcapData(self.soc.pcap_readback(message.world))]
            if isinstance(message, BusRead):
                data = self.soc.bus_read(message.world, message.address, message.length)
                return [BusData(data)]
        except RcteeError as error:
            return [Error.from_exception(error)]

        raise RcteeError(
            ErrorCode.UNKNOWN_TYPE, f"{type(message).__name__} is not a control message"
        )

    def serve(self, proxy_address: Address, control_address: Address) -> "DeviceHost":
        """Starts both endpoints in background threads."""
        self._servers = [
            FrameServer(proxy_address, self.proxy.handle_frame, name="proxy").start(),
            FrameServer(
                control_address, message_handler(self.handle_control), name="control"
            ).start(),
        ]
        return self

    @property
    def proxy_address(self) -> Address:
        return self._servers[0].address

    @property
    def control_address(self) -> Address:
        return self._servers[1].address

    def stop(self) -> None:
        for server in self._servers:
            server.stop()
        self._servers = []


def _partition_kind(value: int) -> PartitionKind:
    try:
        return PartitionKind(value)
    except ValueError:
        raise RcteeError(ErrorCode.MALFORMED, f"unknown partition {value}") from None
