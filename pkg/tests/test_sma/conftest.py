import pytest

from rctee.sma import launch_sma


@pytest.fixture
def app(booted_soc):
    return launch_sma(booted_soc)
