"""
The ttp module is the trusted third party: it enrolls devices and users, keeps
the CRP ledger and verifies secure boot reports.
"""

from .database import TtpDatabase
from .provisioning import build_partitions, signed_sma
from .records import DeviceRecord, UserRecord
from .server import TtpServer
from .service import (
    DEFAULT_CRP_COUNT,
    DEFAULT_STABILITY_CHECKS,
    Credential,
    DeviceEnrollment,
    TrustedThirdParty,
)

__all__ = [
    "DEFAULT_CRP_COUNT",
    "DEFAULT_STABILITY_CHECKS",
    "Credential",
    "DeviceEnrollment",
    "DeviceRecord",
    "TrustedThirdParty",
    "TtpDatabase",
    "TtpServer",
    "UserRecord",
    "build_partitions",
    "signed_sma",
]
