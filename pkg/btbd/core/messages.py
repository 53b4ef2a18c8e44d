"""
Console output and logging. Results (reports, tables, help) go to stdout so they can be piped; progress and
diagnostics go to stderr. Everything except `echo` and `table` is also logged when logging is enabled.
"""
import logging
import sys
from typing import Iterable, Optional, Sequence, TextIO

import colorama
import tabulate

from btbd.utils import config

_log_level: int = logging.INFO
_logger = logging.getLogger("btbd")
try:
    _logger.disabled = config.get_config_value("logging.enabled") is not True
    _log_level = config.get_config_value("logging.level", logging.INFO)

    # Only log to a file when the working directory carries a btbd configuration
    _file_formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    _file_handler = logging.FileHandler("btbd.log", delay=True)
    _file_handler.setLevel(logging.DEBUG)
    _file_handler.setFormatter(_file_formatter)
    _logger.addHandler(_file_handler)
    _logger.propagate = False
except FileNotFoundError:
    _logger.disabled = True
finally:
    _logger.setLevel(_log_level if isinstance(_log_level, (int, str)) else logging.INFO)


def _emit(colour: str, message: str, stream: Optional[TextIO] = None) -> None:
    print(f"{colour}{message}{colorama.Style.RESET_ALL}", file=stream or sys.stdout)


def echo(message: str) -> None:
    """Prints a result on stdout without logging it.

    Args:
        message: The message to print.
    """
    _emit(colorama.Fore.WHITE, message)


def table(rows: Iterable[Sequence[object]], headers: Sequence[str] = ()) -> None:
    """Prints rows as a plain table on stdout, with a header line when `headers` is given.

    Args:
        rows: The table rows.
        headers: Column titles.
    """
    # Cells are printed as given, "0.5000" stays "0.5000".
    if headers:
        echo(tabulate.tabulate(rows, headers=headers, disable_numparse=True))
    else:
        echo(tabulate.tabulate(rows, tablefmt="plain", disable_numparse=True))


def header(message: str) -> None:
    _logger.log(logging.INFO, message)
    _emit(colorama.Fore.BLUE, message, sys.stderr)


def info(message: str) -> None:
    _logger.log(logging.INFO, message)
    _emit(colorama.Fore.WHITE, message, sys.stderr)


def debug(message: str) -> None:
    """Logs a message, never prints it. Building the message is wasted work unless `is_debugging()`."""
    _logger.log(logging.DEBUG, message)


def warning(message: str) -> None:
    _logger.log(logging.WARNING, message)
    _emit(colorama.Fore.YELLOW, f"WARNING: {message}", sys.stderr)


def error(message: str, err: Optional[BaseException] = None) -> None:
    """Prints an error on stderr and logs it.

    Args:
        message: The message to print.
        err: The error behind the message; its repr is printed and logged as well.
    """
    _logger.log(logging.ERROR, message)
    _emit(colorama.Fore.RED, f"ERROR: {message}", sys.stderr)

    if err is not None:
        _logger.log(logging.ERROR, err)
        _emit(colorama.Fore.RED, repr(err), sys.stderr)


def success(message: str) -> None:
    _logger.log(logging.INFO, message)
    _emit(colorama.Fore.GREEN, f"✓ {message}", sys.stderr)


def is_debugging() -> bool:
    """Tells whether debug messages reach the log, so callers can skip building expensive ones."""
    return not _logger.disabled and _logger.isEnabledFor(logging.DEBUG)
