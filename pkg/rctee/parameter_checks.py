from typing import Any, Sequence

from rctee.errors import ErrorCode, RcteeError


def _check_length(value: Any, expected: int, name: str) -> bytes:
    """
    Checks that a byte string has exactly the expected length.

    Parameters
    ----------
    value : bytes-like
        The value that will be checked.
    expected : int
        The required length in bytes.
    name : str
        Name of the parameter, used in the error message.

    Raises
    ------
    RcteeError
        BAD_PARAMS if the value is not bytes-like or has the wrong length.

    Returns
    -------
    The value as immutable bytes.
    """
    if not isinstance(value, (bytes, bytearray, memoryview)):
        raise RcteeError(
            ErrorCode.BAD_PARAMS,
            f"{name} must be a byte string. Got {type(value).__name__} instead.",
        )
    value = bytes(value)
    if len(value) != expected:
        raise RcteeError(
            ErrorCode.BAD_PARAMS,
            f"{name} must be {expected} bytes long. Got {len(value)} instead.",
        )
    return value


def _check_positive_int(value: Any, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise RcteeError(
            ErrorCode.BAD_PARAMS,
            f"{name} must be an integer >= {minimum}. Got {value} instead.",
        )
    return value


def _check_odd(value: Any, name: str) -> int:
    value = _check_positive_int(value, name)
    if value % 2 != 1:
        raise RcteeError(
            ErrorCode.BAD_PARAMS, f"{name} must be odd. Got {value} instead."
        )
    return value


def _check_non_negative(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
        raise RcteeError(
            ErrorCode.BAD_PARAMS, f"{name} must be a number >= 0. Got {value} instead."
        )
    return float(value)


def _check_positive(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
        raise RcteeError(
            ErrorCode.BAD_PARAMS, f"{name} must be a number > 0. Got {value} instead."
        )
    return float(value)


def _check_unique(values: Sequence[Any], name: str, code: ErrorCode) -> None:
    """Raises ``code`` when the sequence contains repeated values."""
    seen = set()
    for value in values:
        if value in seen:
            raise RcteeError(code, f"{name} contains the repeated value {value!r}.")
        seen.add(value)
