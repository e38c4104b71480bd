import pytest

from rctee.errors import ErrorCode, RcteeError
from rctee.parameter_checks import (
    _check_length,
    _check_non_negative,
    _check_odd,
    _check_positive,
    _check_positive_int,
    _check_unique,
)


def test_check_length():
    assert _check_length(bytearray(b"abcd"), 4, "value") == b"abcd"

    with pytest.raises(RcteeError) as record:
        _check_length(b"abc", 4, "value")
    assert record.value.code is ErrorCode.BAD_PARAMS

    with pytest.raises(RcteeError):
        _check_length("abcd", 4, "value")


def test_check_positive_int():
    assert _check_positive_int(3, "n") == 3
    assert _check_positive_int(0, "n", minimum=0) == 0

    for value in [0, -1, 1.5, True, "2"]:
        with pytest.raises(RcteeError):
            _check_positive_int(value, "n")


def test_check_odd():
    assert _check_odd(11, "n_votes") == 11

    with pytest.raises(RcteeError):
        _check_odd(10, "n_votes")


def test_check_non_negative_and_positive():
    assert _check_non_negative(0, "sigma") == 0.0
    assert _check_positive(1e-3, "interval") == 1e-3

    with pytest.raises(RcteeError):
        _check_non_negative(-0.1, "sigma")
    with pytest.raises(RcteeError):
        _check_positive(0, "interval")


def test_check_unique():
    _check_unique([1, 2, 3], "ids", ErrorCode.MALFORMED)

    with pytest.raises(RcteeError) as record:
        _check_unique([1, 2, 1], "ids", ErrorCode.ADDR_COLLISION)
    assert record.value.code is ErrorCode.ADDR_COLLISION
