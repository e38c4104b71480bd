"""Challenge-response pair enrollment and the CRP ledger kept by the TTP."""

import logging
from typing import Callable, List, Tuple

import numpy as np
import pandas as pd
from sklearn.utils import check_random_state

from rctee.errors import ErrorCode, RcteeError
from rctee.parameter_checks import _check_positive_int
from rctee.puf.challenge import (
    CRP_CHALLENGE_PAIRS,
    Challenge,
    Response,
    _pairs_array,
    random_challenge,
)
from rctee.puf.ro_puf import RandomState, RoPufModel

logger = logging.getLogger(__name__)

_COLUMNS = ["challenge", "response", "n_bits", "consumed"]

# candidate challenges evaluated per numpy batch during enrollment
_BATCH_SIZE = 256
# challenge draws allowed per requested CRP before enrollment gives up
_DRAWS_PER_CRP = 256


class CrpSet:
    """
    Ordered table of challenge-response pairs with a consumed flag.

    Challenges are pairwise distinct and a consumed entry never becomes unconsumed,
    so a challenge is issued at most once.

    Parameters
    ----------
    entries : list of (Challenge, Response) or (Challenge, Response, bool)
        The pairs in enrollment order; the optional third item is the consumed flag.

    Raises
    ------
    RcteeError
        BAD_PARAMS if two entries share a challenge or a response has a different
        length than its challenge.
    """

    def __init__(self, entries: List[tuple]) -> None:
        rows = []
        for entry in entries:
            challenge, response = entry[0], entry[1]
            consumed = bool(entry[2]) if len(entry) > 2 else False
            if len(challenge) != len(response):
                raise RcteeError(
                    ErrorCode.BAD_PARAMS,
                    "every response must be as long as its challenge",
                )
            rows.append(
                (challenge.to_bytes(), response.packed(), len(response), consumed)
            )

        self._table = pd.DataFrame(rows, columns=_COLUMNS)
        self._table["consumed"] = self._table["consumed"].astype(bool)

        if self._table["challenge"].duplicated().any():
            raise RcteeError(
                ErrorCode.BAD_PARAMS, "challenges must be pairwise distinct"
            )

    def __len__(self) -> int:
        return len(self._table)

    def entry(self, index: int) -> Tuple[Challenge, Response]:
        row = self._table.iloc[index]
        challenge = Challenge.from_bytes(row["challenge"])
        response = Response.from_packed(row["response"], int(row["n_bits"]))
        return challenge, response

    def is_consumed(self, index: int) -> bool:
        return bool(self._table["consumed"].iat[index])

    def next_unconsumed(self) -> int:
        """
        Position of the first unconsumed entry in enrollment order.

        Raises
        ------
        RcteeError
            CRP_EXHAUSTED when every entry has been consumed.
        """
        free = np.flatnonzero(~self._table["consumed"].to_numpy())
        if free.size == 0:
            raise RcteeError(ErrorCode.CRP_EXHAUSTED, "no unconsumed CRP left")
        return int(free[0])

    def consume(self, index: int) -> None:
        if self.is_consumed(index):
            raise RcteeError(ErrorCode.BAD_STATE, f"CRP {index} was already consumed")
        self._table.iat[index, self._table.columns.get_loc("consumed")] = True

    def status(self) -> Tuple[int, int]:
        """(total, consumed)"""
        return len(self._table), int(self._table["consumed"].sum())

    def to_frame(self) -> pd.DataFrame:
        return self._table.copy()

    def entries(self) -> List[Tuple[Challenge, Response, bool]]:
        return [
            self.entry(k) + (self.is_consumed(k),) for k in range(len(self._table))
        ]


def enroll_crps(
    model: RoPufModel,
    count: int,
    challenge_source: Callable[[int], bytes],
    random_state: RandomState = None,
    stability_checks: int = 0,
    n_pairs: int = CRP_CHALLENGE_PAIRS,
) -> CrpSet:
    """
    Collects ``count`` CRPs from a PUF.

    Challenges of ``n_pairs`` pairs are drawn from ``challenge_source`` (usually a
    :class:`~rctee.crypto.Drbg`), rejecting pairs with i == j and duplicate
    challenges. Each response is the K-vote evaluation of the model.

    Parameters
    ----------
    model : RoPufModel
    count : int
        Number of CRPs, >= 1.
    challenge_source : callable
        ``source(n) -> n bytes``.
    random_state : int, RandomState instance or None
        Noise generator for the evaluations.
    stability_checks : int, default=0
        Extra evaluations per candidate. When > 0 a candidate is kept only if all
        ``1 + stability_checks`` evaluations agree, which drops challenges that
        select pairs with nearly equal frequencies.
    n_pairs : int, default=64
        Response length in bits.

    Returns
    -------
    CrpSet with every entry unconsumed.

    Raises
    ------
    RcteeError
        BAD_PARAMS when ``count`` CRPs are not found within 256 challenge draws
        per CRP, for a PUF too noisy to pass the stability checks or with too
        few distinct challenges.
    """
    count = _check_positive_int(count, "count")
    stability_checks = _check_positive_int(stability_checks, "stability_checks", 0)
    rng = check_random_state(random_state)

    seen = set()
    accepted: List[Tuple[Challenge, Response]] = []
    max_draws = _DRAWS_PER_CRP * count
    draws = 0

    while len(accepted) < count:
        needed = count - len(accepted)
        batch_size = (
            needed if stability_checks == 0 else min(2 * needed + 8, _BATCH_SIZE)
        )

        candidates: List[Challenge] = []
        while len(candidates) < batch_size and draws < max_draws:
            draws += 1
            challenge = random_challenge(
                challenge_source, n_pairs, model.n_oscillators_
            )
            key = challenge.to_bytes()
            if key not in seen:
                seen.add(key)
                candidates.append(challenge)

        if candidates:
            pairs = _pairs_array(candidates)
            reference = model.evaluate_pairs(pairs, rng)
            stable = np.ones(len(candidates), dtype=bool)
            for _ in range(stability_checks):
                stable &= np.all(model.evaluate_pairs(pairs, rng) == reference, axis=1)

            for k in np.flatnonzero(stable):
                if len(accepted) == count:
                    break
                bits = tuple(reference[k].astype(np.uint8).tolist())
                accepted.append((candidates[k], Response(bits)))

        if len(accepted) < count and draws >= max_draws:
            logger.warning("CRP enrollment gave up after %d draws", draws)
            raise RcteeError(
                ErrorCode.BAD_PARAMS,
                f"only {len(accepted)} of {count} CRPs found in {draws} challenge "
                "draws: the PUF is too noisy or has too few distinct challenges",
            )

    return CrpSet(accepted)
