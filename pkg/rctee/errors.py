"""Error codes shared by every party of the simulator.

Each code has a fixed 16-bit value so that it can travel inside ``Error`` frames,
``TtpReject`` frames and sealed invoke responses without translation.
"""

from enum import IntEnum
from typing import Optional


class ErrorCode(IntEnum):
    OK = 0

    # crypto
    AUTH_FAIL = 0x0101
    BAD_POINT = 0x0102
    EMPTY_SEED = 0x0103
    BAD_KEY = 0x0104

    # puf
    BAD_PARAMS = 0x0201
    SAME_INDEX = 0x0202

    # image
    MISSING_PARTITION = 0x0301
    DUPLICATE_PARTITION = 0x0302
    MALFORMED = 0x0303
    ADDR_OUT_OF_REGION = 0x0304
    ADDR_COLLISION = 0x0305

    # device
    BOOT_AUTH_FAIL = 0x0401
    MALFORMED_IMAGE = 0x0402
    WORLD_VIOLATION = 0x0403
    NOT_RUNNING = 0x0404
    PUF_NOT_PRESENT = 0x0405
    PCAP_DISABLED = 0x0406
    UNKNOWN_IP = 0x0407
    ADDR_MISMATCH = 0x0408
    KERNEL_FAULT = 0x0409
    PROT_VIOLATION = 0x040A
    TA_AUTH_FAIL = 0x040B
    BUS_FAULT = 0x040C

    # sma
    CERT_INVALID = 0x0501
    NOT_BOOTED = 0x0502
    BAD_STATE = 0x0503
    SIG_MISMATCH = 0x0504

    # ttp
    DUPLICATE_DEVICE = 0x0601
    UNKNOWN_DEVICE = 0x0602
    MEASUREMENT_MISMATCH = 0x0603
    BAD_REPORT = 0x0604
    CRP_EXHAUSTED = 0x0605
    DECRYPT_FAIL = 0x0606
    UNKNOWN_USER = 0x0607

    # wire
    OVERSIZE = 0x0701
    UNKNOWN_TYPE = 0x0702
    SMA_UNAVAILABLE = 0x0703
    SHARED_MEM_OVERFLOW = 0x0704
    NETWORK_ERROR = 0x0705

    # client
    TTP_REJECTED = 0x0801
    DEVICE_AUTH_FAIL = 0x0802
    MANIFEST_INVALID = 0x0803

    # harness
    VERDICT_MISMATCH = 0x0901


class RcteeError(ValueError):
    """Raised by every operation of the simulator.

    Parameters
    ----------
    code : ErrorCode
        The protocol-level error code.
    detail : str, default=""
        Human readable explanation. Never contains secret material.
    reason : ErrorCode, default=None
        For TTP_REJECTED, the code the TTP gave.
    """

    def __init__(
        self, code: ErrorCode, detail: str = "", reason: Optional[ErrorCode] = None
    ) -> None:
        self.code = ErrorCode(code)
        self.detail = detail
        self.reason = reason
        super().__init__(f"{self.code.name}: {detail}" if detail else self.code.name)


def error_from_code(code: int, detail: str = "") -> RcteeError:
    """Rebuilds an error received over the wire. Unknown values map to MALFORMED."""
    try:
        known: Optional[ErrorCode] = ErrorCode(code)
    except ValueError:
        known = None
    if known is None:
        return RcteeError(ErrorCode.MALFORMED, f"unknown error code {code:#06x}")
    return RcteeError(known, detail)
