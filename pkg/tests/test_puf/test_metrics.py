import numpy as np

from rctee.crypto import drbg
from rctee.puf import (
    bit_aliasing,
    flip_probability,
    instantiate,
    random_challenge,
    reliability,
    uniqueness,
)


def test_intra_device_reliability(puf_model):
    challenge = random_challenge(drbg(b"reliability"), 64, 64)
    reference = puf_model.evaluate(challenge, random_state=0)

    report = reliability(puf_model, challenge, reference, 200, random_state=1)

    assert report.n_evaluations == 200
    assert report.bit_agreement >= 0.99
    low, high = report.exact_match_interval
    assert 0.0 <= low <= report.exact_match_rate <= high <= 1.0


def test_inter_device_uniqueness():
    challenge = random_challenge(drbg(b"uniqueness"), 256, 64)
    responses = [
        instantiate(drbg(b"device %d" % k)(32)).evaluate(challenge, random_state=k)
        for k in range(20)
    ]

    assert 0.45 <= uniqueness(responses) <= 0.55
    aliasing = bit_aliasing(responses)
    assert aliasing.shape == (256,)
    assert 0.4 <= float(np.mean(aliasing)) <= 0.6


def test_flip_probability(puf_model):
    noiseless = instantiate(drbg(b"noiseless")(32), noise_sigma=0)
    assert flip_probability(noiseless, 0, 1) == 0.0

    gaps = np.abs(puf_model.frequencies_[0] - puf_model.frequencies_[1:])
    far = 1 + int(np.argmax(gaps))
    assert flip_probability(puf_model, 0, far) < 1e-6
    assert 0.0 <= flip_probability(puf_model, 0, 1) <= 0.5
