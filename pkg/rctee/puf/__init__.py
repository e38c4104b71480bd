"""
The puf module models the ring-oscillator PUF placed in the initial hardware
design: per-device frequencies, noisy pairwise comparison, CRP enrollment and seed
extraction.
"""

from .challenge import (
    CRP_CHALLENGE_PAIRS,
    SEED_CHALLENGE_PAIRS,
    Challenge,
    Response,
    random_challenge,
)
from .crp import CrpSet, enroll_crps
from .metrics import (
    ReliabilityReport,
    bit_aliasing,
    flip_probability,
    reliability,
    uniqueness,
)
from .ro_puf import RoPufModel, instantiate, seed_from_response

__all__ = [
    "CRP_CHALLENGE_PAIRS",
    "SEED_CHALLENGE_PAIRS",
    "Challenge",
    "CrpSet",
    "ReliabilityReport",
    "Response",
    "RoPufModel",
    "bit_aliasing",
    "enroll_crps",
    "flip_probability",
    "instantiate",
    "random_challenge",
    "reliability",
    "seed_from_response",
    "uniqueness",
]
