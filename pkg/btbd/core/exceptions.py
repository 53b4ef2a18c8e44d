from typing import Optional


# Base btbd Exception
class BtbdException(Exception):
    """btbd's BaseException-like Exception class, uses docstrings to set default error messages.

    Attributes:
        exit_code: The process exit code the console application reports for this error.
    """

    exit_code: int = 2

    def __init__(self, message: Optional[str] = None):
        super().__init__(message or self.__doc__)


class UsageError(BtbdException):
    """Invalid command line usage, run "btbd help" for an overview of the available commands."""

    exit_code = 1


class DataError(BtbdException):
    """The supplied data could not be processed."""

    exit_code = 2


class InputError(DataError):
    """The supplied input is malformed or out of range."""


class DecodeError(DataError):
    """The bitstream is malformed and could not be decoded.

    Args:
        message: A description of what went wrong.
        position: The bit position in the stream at which the problem was detected, if known.
    """

    def __init__(self, message: Optional[str] = None, position: Optional[int] = None):
        self.position = position
        if message is not None and position is not None:
            message = f"{message} (at bit {position})"

        super().__init__(message)


class CodecInvariantError(BtbdException):
    """The encoder produced an internally inconsistent state."""


class UnknownCommandError(UsageError):
    """The specified command could not be found, are you sure it is registered?"""


class DuplicateCommandError(BtbdException):
    """A command with the same name was already registered to the CommandManager."""
