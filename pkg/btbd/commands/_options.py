import argparse
from typing import Any, Optional

from btbd.codec.frames import load_sequence_file, resolve_format
from btbd.ddl.frames import Sequence
from btbd.utils import config

from .exceptions import InvalidOptionError, MissingDimensionsError

FORMATS = ("raw", "pgm")


def add_format_argument(parser: argparse.ArgumentParser, flag: str, subject: str) -> None:
    parser.add_argument(
        flag, choices=FORMATS, default=None, help=f"The {subject} format, inferred from a .pgm extension."
    )


def add_dimension_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--width", type=int, default=None, help="Frame width of raw sequences.")
    parser.add_argument("--height", type=int, default=None, help="Frame height of raw sequences.")
    parser.add_argument("--frames", type=int, default=None, help="Frame count of raw sequences, default: all.")


def load_sequence(path: str, args: argparse.Namespace, file_format: Optional[str] = None) -> Sequence:
    """Loads a sequence named on the command line with the raw dimensions of `args`.

    Raises:
        MissingDimensionsError: The file is raw and --width or --height is missing.
    """
    if resolve_format(path, file_format) == "raw" and (args.width is None or args.height is None):
        raise MissingDimensionsError(f"{path} is a raw sequence, --width and --height are required")

    return load_sequence_file(path, args.width, args.height, args.frames, file_format)


def setting(value: Optional[Any], key: str, default: Any) -> Any:
    """Resolves an option: the command line flag wins over the configuration file, which wins over `default`."""
    if value is not None:
        return value
    return config.get_config_value(key, default)


def positive(value: Any, name: str, upper: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 0 < value <= upper:
        raise InvalidOptionError(f"{name} must be an integer in 1..{upper}, got {value!r}")
    return value
