"""Quality statistics of a PUF population: reliability, uniqueness, bit aliasing."""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist
from scipy.stats import binom, norm
from sklearn.utils import check_random_state
from statsmodels.stats.proportion import proportion_confint

from rctee.puf.challenge import Challenge, Response
from rctee.puf.ro_puf import RandomState, RoPufModel


@dataclass(frozen=True)
class ReliabilityReport:
    """
    Intra-device reproducibility of one challenge.

    Attributes
    ----------
    bit_agreement :
        Mean fraction of bits equal to the reference over all evaluations.
    exact_match_rate :
        Fraction of evaluations that reproduce the reference exactly.
    exact_match_interval :
        95% Wilson interval of ``exact_match_rate``.
    n_evaluations :
        Number of evaluations.
    """

    bit_agreement: float
    exact_match_rate: float
    exact_match_interval: Tuple[float, float]
    n_evaluations: int


def reliability(
    model: RoPufModel,
    challenge: Challenge,
    reference: Response,
    n_evaluations: int = 200,
    random_state: RandomState = None,
) -> ReliabilityReport:
    """Re-evaluates ``challenge`` and compares every answer with ``reference``."""
    rng = check_random_state(random_state)
    pairs = np.broadcast_to(challenge.as_array(), (n_evaluations, len(challenge), 2))
    bits = model.evaluate_pairs(pairs, rng)
    agreement = bits == reference.as_array().astype(bool)

    matches = int(agreement.all(axis=1).sum())
    low, high = proportion_confint(matches, n_evaluations, alpha=0.05, method="wilson")

    return ReliabilityReport(
        bit_agreement=float(agreement.mean()),
        exact_match_rate=matches / n_evaluations,
        exact_match_interval=(float(low), float(high)),
        n_evaluations=n_evaluations,
    )


def uniqueness(responses: Sequence[Response]) -> float:
    """Mean pairwise fractional Hamming distance between devices' responses."""
    matrix = np.stack([r.as_array() for r in responses]).astype(bool)
    return float(pdist(matrix, metric="hamming").mean())


def bit_aliasing(responses: Sequence[Response]) -> np.ndarray:
    """Fraction of devices answering 1, per response bit. Ideal value is 0.5."""
    return np.stack([r.as_array() for r in responses]).mean(axis=0)


def flip_probability(model: RoPufModel, i: int, j: int) -> float:
    """
    Probability that one majority-voted evaluation of pair (i, j) differs from the
    noiseless comparison, ignoring count quantisation.
    """
    if model.noise_sigma == 0:
        return 0.0
    delta = abs(model.frequencies_[i] - model.frequencies_[j])
    per_trial = norm.cdf(-delta / (model.noise_sigma * np.sqrt(2.0)))
    return float(binom.sf(model.n_votes // 2, model.n_votes, per_trial))
