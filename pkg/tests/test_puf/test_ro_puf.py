import numpy as np
import pytest

from rctee.crypto import drbg
from rctee.errors import ErrorCode, RcteeError
from rctee.puf import (
    Challenge,
    RoPufModel,
    instantiate,
    random_challenge,
    seed_from_response,
)


def test_instantiate_is_deterministic(device_seed):
    first, second = instantiate(device_seed), instantiate(device_seed)

    np.testing.assert_array_equal(first.frequencies_, second.frequencies_)
    assert first.n_oscillators_ == 64
    assert np.all(np.abs(first.frequencies_ - 100e6) <= 1e6)
    assert not first.frequencies_.flags.writeable


def test_instantiate_parameters(device_seed):
    model = instantiate(device_seed, n_oscillators=128, noise_sigma=0, n_votes=3)

    assert model.n_oscillators_ == 128
    assert model.noise_sigma == 0.0
    assert model.n_votes == 3

    with pytest.raises(RcteeError):
        instantiate(b"short")
    with pytest.raises(RcteeError):
        instantiate(device_seed, n_oscillators=1)
    with pytest.raises(RcteeError):
        instantiate(device_seed, n_oscillators=257)
    with pytest.raises(RcteeError):
        instantiate(device_seed, n_votes=4)
    with pytest.raises(RcteeError):
        instantiate(device_seed, noise_sigma=-1.0)


def test_noiseless_bit_compares_frequencies():
    model = RoPufModel([100e6, 101e6, 99e6], noise_sigma=0)

    assert model.evaluate_bit(1, 0) == 1
    assert model.evaluate_bit(0, 1) == 0
    assert model.evaluate_bit(2, 0) == 0
    response = model.evaluate(Challenge(((1, 0), (0, 2), (2, 1))))
    assert response.bits == (1, 1, 0)


def test_bad_pairs(puf_model):
    with pytest.raises(RcteeError) as record:
        puf_model.evaluate_bit(3, 3)
    assert record.value.code is ErrorCode.SAME_INDEX

    with pytest.raises(RcteeError) as record:
        puf_model.evaluate(Challenge(((0, 64),)))
    assert record.value.code is ErrorCode.BAD_PARAMS

    with pytest.raises(RcteeError) as record:
        puf_model.evaluate(Challenge(()))
    assert record.value.code is ErrorCode.BAD_PARAMS


def test_random_challenge_has_no_equal_pairs():
    challenge = random_challenge(drbg(b"challenge"), 256, 64)

    assert len(challenge) == 256
    assert all(i != j and 0 <= i < 64 and 0 <= j < 64 for i, j in challenge.pairs)
    assert random_challenge(drbg(b"challenge"), 256, 64) == challenge


def test_seed_from_puf(puf_model):
    challenge = random_challenge(drbg(b"seed challenge"), 256, 64)
    seed = puf_model.seed_from_puf(challenge, random_state=1)

    assert len(seed) == 32
    assert seed == seed_from_response(puf_model.evaluate(challenge, random_state=1))

    with pytest.raises(RcteeError):
        puf_model.seed_from_puf(random_challenge(drbg(b"short"), 64, 64))


def test_evaluate_pairs_batches(puf_model):
    pairs = random_challenge(drbg(b"batch"), 16, 64).as_array()
    bits = puf_model.evaluate_pairs(np.stack([pairs] * 5), random_state=0)

    assert bits.shape == (5, 16)
    assert bits.dtype == bool
