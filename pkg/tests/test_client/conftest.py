import pytest

from rctee.client import manifest_from_ips


@pytest.fixture(scope="module")
def manifest():
    return manifest_from_ips(
        [("adder", "add32", True, 2, 1), ("mixer", "xor", False, 2, 1)],
        filler_len=4096,
    )


@pytest.fixture
def user(testbed):
    return testbed.user("alice")


@pytest.fixture
def session(testbed, user):
    return user.attest(testbed.device_link(), testbed.ttp_link(), name="board-0")
