from rctee.errors import ErrorCode, RcteeError, error_from_code


def test_error_message_and_attributes():
    error = RcteeError(ErrorCode.TTP_REJECTED, "no", reason=ErrorCode.UNKNOWN_DEVICE)

    assert isinstance(error, ValueError)
    assert error.code is ErrorCode.TTP_REJECTED
    assert error.reason is ErrorCode.UNKNOWN_DEVICE
    assert str(error) == "TTP_REJECTED: no"
    assert str(RcteeError(ErrorCode.AUTH_FAIL)) == "AUTH_FAIL"


def test_error_from_code():
    assert error_from_code(0x0504, "x").code is ErrorCode.SIG_MISMATCH
    assert error_from_code(0xBEEF).code is ErrorCode.MALFORMED


def test_codes_are_distinct():
    values = [code.value for code in ErrorCode.__members__.values()]
    assert len(values) == len(set(values))
