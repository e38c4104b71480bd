"""
The sma module is the trusted application that answers attestation requests and
deploys and invokes user IPs on behalf of an attested user.
"""

from .application import SecureManagementApp, launch_sma
from .endpoint import SmaEndpoint
from .session import SessionState, SmaSession

__all__ = [
    "SecureManagementApp",
    "SessionState",
    "SmaEndpoint",
    "SmaSession",
    "launch_sma",
]
