from typing import Optional, Sequence, Union

import numpy as np
from sklearn.utils import check_random_state

from rctee.crypto import Drbg, hash_data
from rctee.errors import ErrorCode, RcteeError
from rctee.parameter_checks import (
    _check_length,
    _check_non_negative,
    _check_odd,
    _check_positive,
    _check_positive_int,
)
from rctee.puf.challenge import (
    MAX_CHALLENGE_PAIRS,
    SEED_CHALLENGE_PAIRS,
    Challenge,
    Response,
)

RandomState = Union[None, int, np.random.RandomState]

BASE_FREQUENCY = 100e6
FREQUENCY_SPREAD = 1e6
DEFAULT_OSCILLATORS = 64
DEFAULT_NOISE_SIGMA = 2e3
DEFAULT_COUNT_INTERVAL = 1e-3
DEFAULT_VOTES = 11

_SEED_SIZE = 32


class RoPufModel:
    """
    Software model of a ring-oscillator PUF.

    N oscillators run at frequencies fixed by manufacturing variation. A challenge
    selects pairs of oscillators; for each pair both oscillations are counted during
    a fixed interval and the response bit tells which one was faster. Counting is
    noisy: each count is ``floor((f + e) * T)`` with ``e ~ N(0, noise_sigma)`` and
    every bit is the majority of ``n_votes`` independent trials.

    The model is immutable once built and evaluation takes an explicit random
    state, so it can be shared by threads.

    Parameters
    ----------
    frequencies : array-like of shape (n_oscillators,)
        Nominal oscillator frequencies in Hz. All must be > 0.

    noise_sigma : float, default=2e3
        Standard deviation of the frequency noise in Hz, per count.

    count_interval : float, default=1e-3
        Counting window T in seconds.

    n_votes : int, default=11
        Number of trials per bit. Must be odd.

    device_seed : bytes, default=None
        The manufacturing seed the frequencies were derived from, if any.

    Attributes
    ----------
    frequencies_ :
        Read-only numpy array with the nominal frequencies.

    n_oscillators_ :
        Number of oscillators N.
    """

    def __init__(
        self,
        frequencies: Sequence[float],
        noise_sigma: float = DEFAULT_NOISE_SIGMA,
        count_interval: float = DEFAULT_COUNT_INTERVAL,
        n_votes: int = DEFAULT_VOTES,
        device_seed: Optional[bytes] = None,
    ) -> None:

        frequencies = np.asarray(frequencies, dtype=np.float64)
        if frequencies.ndim != 1 or not 2 <= frequencies.shape[0] <= 256:
            raise RcteeError(
                ErrorCode.BAD_PARAMS,
                "frequencies must be a vector of 2 to 256 values. Got shape "
                f"{frequencies.shape} instead.",
            )
        if not np.all(np.isfinite(frequencies)) or np.any(frequencies <= 0):
            raise RcteeError(ErrorCode.BAD_PARAMS, "all frequencies must be > 0.")

        self.noise_sigma = _check_non_negative(noise_sigma, "noise_sigma")
        self.count_interval = _check_positive(count_interval, "count_interval")
        self.n_votes = _check_odd(n_votes, "n_votes")
        self.device_seed = device_seed

        frequencies = frequencies.copy()
        frequencies.setflags(write=False)
        self.frequencies_ = frequencies
        self.n_oscillators_ = frequencies.shape[0]

    @classmethod
    def instantiate(
        cls,
        device_seed: bytes,
        n_oscillators: int = DEFAULT_OSCILLATORS,
        noise_sigma: float = DEFAULT_NOISE_SIGMA,
        count_interval: float = DEFAULT_COUNT_INTERVAL,
        n_votes: int = DEFAULT_VOTES,
    ) -> "RoPufModel":
        """
        Builds the PUF of the device manufactured from ``device_seed``.

        ``frequency_i = 100 MHz + 1 MHz * u_i`` where ``u_i`` in [-1, 1) is decoded
        from four big-endian bytes of ``drbg(device_seed)``.

        Raises
        ------
        RcteeError
            BAD_PARAMS if the seed is not 32 bytes, N < 2 or N > 256, or the other
            parameters are out of range.
        """
        device_seed = _check_length(device_seed, _SEED_SIZE, "device_seed")
        n_oscillators = _check_positive_int(n_oscillators, "n_oscillators", minimum=2)
        if n_oscillators > 256:
            raise RcteeError(
                ErrorCode.BAD_PARAMS,
                f"n_oscillators must be <= 256. Got {n_oscillators} instead.",
            )

        raw = Drbg(device_seed).read(4 * n_oscillators)
        words = np.frombuffer(raw, dtype=">u4").astype(np.float64)
        u = words / 2.0 ** 32 * 2.0 - 1.0
        frequencies = BASE_FREQUENCY + FREQUENCY_SPREAD * u

        return cls(
            frequencies,
            noise_sigma=noise_sigma,
            count_interval=count_interval,
            n_votes=n_votes,
            device_seed=device_seed,
        )

    def _check_pairs(self, pairs: np.ndarray) -> np.ndarray:
        if pairs.shape[-2] == 0 or pairs.shape[-2] > MAX_CHALLENGE_PAIRS:
            raise RcteeError(
                ErrorCode.BAD_PARAMS,
                f"a challenge must hold 1 to {MAX_CHALLENGE_PAIRS} pairs. Got "
                f"{pairs.shape[-2]} instead.",
            )
        if np.any(pairs < 0) or np.any(pairs >= self.n_oscillators_):
            raise RcteeError(
                ErrorCode.BAD_PARAMS,
                f"pair indices must be in [0, {self.n_oscillators_}).",
            )
        if np.any(pairs[..., 0] == pairs[..., 1]):
            raise RcteeError(ErrorCode.SAME_INDEX, "a pair selects the same oscillator")
        return pairs

    def oscillation_counts(
        self, pairs: np.ndarray, n_trials: int, random_state: RandomState = None
    ) -> np.ndarray:
        """Noisy counts of shape ``(n_trials,) + pairs.shape``."""
        rng = check_random_state(random_state)
        nominal = self.frequencies_[pairs]
        noise = rng.normal(0.0, self.noise_sigma, size=(n_trials,) + pairs.shape)
        return np.floor((nominal + noise) * self.count_interval)

    def evaluate_pairs(
        self, pairs: np.ndarray, random_state: RandomState = None
    ) -> np.ndarray:
        """
        Majority-voted bits for an array of pairs.

        Parameters
        ----------
        pairs : ndarray of shape (..., n_pairs, 2)
            Any number of leading batch dimensions.
        random_state : int, RandomState instance or None

        Returns
        -------
        bits : boolean ndarray of shape (..., n_pairs)
        """
        pairs = self._check_pairs(np.asarray(pairs, dtype=np.int64))
        counts = self.oscillation_counts(pairs, self.n_votes, random_state)
        votes = counts[..., 0] > counts[..., 1]
        return votes.sum(axis=0) > self.n_votes // 2

    def evaluate_bit(self, i: int, j: int, random_state: RandomState = None) -> int:
        """
        Single noisy comparison of oscillators i and j (no voting).

        Returns 1 if ``count_i > count_j`` else 0; ties give 0.

        Raises
        ------
        RcteeError
            SAME_INDEX if i == j, BAD_PARAMS if an index is out of range.
        """
        pairs = self._check_pairs(np.array([[i, j]], dtype=np.int64))
        counts = self.oscillation_counts(pairs, 1, random_state)
        return int(counts[0, 0, 0] > counts[0, 0, 1])

    def evaluate(
        self, challenge: Challenge, random_state: RandomState = None
    ) -> Response:
        """
        Response to ``challenge``: each bit is the majority over ``n_votes`` trials
        with the noise re-sampled for every trial.
        """
        if len(challenge) == 0:
            raise RcteeError(ErrorCode.BAD_PARAMS, "the challenge is empty")
        bits = self.evaluate_pairs(challenge.as_array(), random_state)
        return Response(tuple(bits.astype(np.uint8).tolist()))

    def seed_from_puf(
        self, challenge: Challenge, random_state: RandomState = None
    ) -> bytes:
        """
        32-byte seed: hash of the packed response to a 256-pair challenge.

        Raises
        ------
        RcteeError
            BAD_PARAMS if the challenge does not hold exactly 256 pairs.
        """
        if len(challenge) != SEED_CHALLENGE_PAIRS:
            raise RcteeError(
                ErrorCode.BAD_PARAMS,
                f"seed challenges must hold {SEED_CHALLENGE_PAIRS} pairs. Got "
                f"{len(challenge)} instead.",
            )
        return seed_from_response(self.evaluate(challenge, random_state))

    def __repr__(self) -> str:
        return (
            f"RoPufModel(n_oscillators={self.n_oscillators_}, "
            f"noise_sigma={self.noise_sigma}, count_interval={self.count_interval}, "
            f"n_votes={self.n_votes})"
        )


def seed_from_response(response: Response) -> bytes:
    """32-byte key seed extracted from a PUF response."""
    return hash_data(response.packed())[:_SEED_SIZE]


def instantiate(
    device_seed: bytes,
    n_oscillators: int = DEFAULT_OSCILLATORS,
    noise_sigma: float = DEFAULT_NOISE_SIGMA,
    count_interval: float = DEFAULT_COUNT_INTERVAL,
    n_votes: int = DEFAULT_VOTES,
) -> RoPufModel:
    return RoPufModel.instantiate(
        device_seed, n_oscillators, noise_sigma, count_interval, n_votes
    )
