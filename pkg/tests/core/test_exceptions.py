from btbd.commands.exceptions import InvalidStepError, MissingDimensionsError
from btbd.core.exceptions import (
    BtbdException,
    CodecInvariantError,
    DataError,
    DecodeError,
    InputError,
    UnknownCommandError,
    UsageError,
)


def test_default_messages() -> None:
    assert str(InputError()) == "The supplied input is malformed or out of range."
    assert str(InputError("bad frame")) == "bad frame"


def test_exit_codes() -> None:
    for error in (UsageError, UnknownCommandError, InvalidStepError, MissingDimensionsError):
        assert error().exit_code == 1
    for error in (DataError, InputError, DecodeError, CodecInvariantError, BtbdException):
        assert error().exit_code == 2


def test_decode_error_position() -> None:
    error = DecodeError("truncated stream", position=77)
    assert error.position == 77
    assert str(error) == "truncated stream (at bit 77)"

    assert DecodeError("truncated stream").position is None
    assert str(DecodeError("truncated stream")) == "truncated stream"
    assert isinstance(DecodeError(), DataError)
