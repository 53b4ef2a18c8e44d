from typing import Callable, Optional, Type
from types import TracebackType


class Expects:
    """Context manager when we are expecting that an error could occur, and we accept this.

    Subclasses of an expected error are accepted as well.

    Args:
        expected_errors (list): A list of expected errors to skip.

    Attributes:
        expected_errors (list): A list of expected errors to skip.
    """

    def __init__(self, expected_errors: list[Type[BaseException]]) -> None:
        self.expected_errors: list[Type[BaseException]] = expected_errors

    def __enter__(self) -> None:
        pass

    def __exit__(
        self,
        err: Optional[Type[BaseException]],
        value: Optional[BaseException],
        traceback: Optional[TracebackType],
    ) -> bool:
        if not err:
            return True

        return issubclass(err, tuple(self.expected_errors))


class Translates:
    """Context manager that re-raises expected low-level errors as a domain error.

    Args:
        expected_errors (list): The errors to translate.
        factory: Builds the replacement error from the original one.

    Example:
        >>> with Translates([IndexError], lambda err: DecodeError(str(err))):
        >>>     table[index]
    """

    def __init__(
        self,
        expected_errors: list[Type[BaseException]],
        factory: Callable[[BaseException], BaseException],
    ) -> None:
        self.expected_errors: list[Type[BaseException]] = expected_errors
        self.factory = factory

    def __enter__(self) -> None:
        pass

    def __exit__(
        self,
        err: Optional[Type[BaseException]],
        value: Optional[BaseException],
        traceback: Optional[TracebackType],
    ) -> bool:
        if err is None or value is None:
            return True

        if issubclass(err, tuple(self.expected_errors)):
            raise self.factory(value) from value

        return False
