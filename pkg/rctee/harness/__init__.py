"""
The harness module runs the whole system in-process and plays the adversary:
the happy path, the attack scenarios and the device authentication trials.
"""

from .interceptor import (
    CapturedFrame,
    FrameHook,
    Interceptor,
    Wiretap,
    flip_payload_byte,
    rewrite,
    substitute,
)
from .runner import (
    REPORT_COLUMNS,
    authentication_trials,
    check_report,
    format_report,
    run_attack,
    run_happy_path,
    run_suite,
    write_report,
)
from .scenarios import DESIGN, SCENARIOS, Scenario, scenario, verdict_of
from .testbed import Testbed

__all__ = [
    "CapturedFrame",
    "DESIGN",
    "FrameHook",
    "Interceptor",
    "REPORT_COLUMNS",
    "SCENARIOS",
    "Scenario",
    "Testbed",
    "Wiretap",
    "authentication_trials",
    "check_report",
    "flip_payload_byte",
    "format_report",
    "rewrite",
    "run_attack",
    "run_happy_path",
    "run_suite",
    "scenario",
    "substitute",
    "verdict_of",
    "write_report",
]
