import numpy as np
import pytest

from rctee.crypto import SymmetricKey, drbg, issue_certificate, sign_keygen
from rctee.device import FpgaSoc
from rctee.harness import Testbed
from rctee.image import package
from rctee.puf import Challenge, instantiate
from rctee.ttp import build_partitions, signed_sma


@pytest.fixture(scope="module")
def device_seed():
    return drbg(b"tests-device-seed")(32)


@pytest.fixture(scope="module")
def other_device_seed():
    return drbg(b"tests-other-device-seed")(32)


@pytest.fixture(scope="module")
def puf_model(device_seed):
    return instantiate(device_seed)


@pytest.fixture(scope="module")
def stable_challenge(puf_model):
    # pairs the fastest oscillators with the slowest ones: every bit is 1
    order = np.argsort(puf_model.frequencies_)
    return Challenge(tuple((int(order[-1 - k]), int(order[k])) for k in range(8)))


@pytest.fixture(scope="module")
def bbram_key():
    return SymmetricKey(drbg(b"tests-bbram")(32), b"bbram")


@pytest.fixture(scope="module")
def ttp_keys():
    return sign_keygen(drbg(b"tests-ttp")(32))


@pytest.fixture(scope="module")
def ta_keys():
    return sign_keygen(drbg(b"tests-ta")(32))


@pytest.fixture(scope="module")
def user_keys():
    return sign_keygen(drbg(b"tests-user")(32))


@pytest.fixture(scope="module")
def user_cert(ttp_keys, user_keys):
    return issue_certificate(ttp_keys, b"U" * 16, user_keys.public)


@pytest.fixture(scope="module")
def sma(ttp_keys, ta_keys):
    return signed_sma(ttp_keys.public, ta_keys.secret)


@pytest.fixture(scope="module")
def partitions(ta_keys, sma):
    artifact, signature = sma
    return build_partitions(b"test-board", ta_keys.public, artifact, signature)


@pytest.fixture(scope="module")
def image(partitions, bbram_key):
    return package(partitions, bbram_key, drbg(b"tests-nonces"))


@pytest.fixture
def soc(device_seed, bbram_key, image):
    device = FpgaSoc(device_seed, random_state=0)
    device.program_bbram(bbram_key)
    device.flash(image)
    return device


@pytest.fixture
def booted_soc(soc):
    return soc.power_on()


@pytest.fixture
def testbed():
    return Testbed(seed=7)
