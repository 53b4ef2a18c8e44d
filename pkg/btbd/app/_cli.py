import sys
import argparse
from typing import NoReturn, Optional

from btbd.ddl.commands import CommandInterface
from btbd.core import messages
from btbd.core.exceptions import BtbdException, UsageError
from btbd.utils import version

from ._app import command_manager

DATA_ERROR_EXIT_CODE = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as exceptions instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _create_argument_parser(
    commands: list[CommandInterface],
) -> argparse.ArgumentParser:
    """Creates an argument parser with recursively added subparsers based on a list of commands.

    Args:
        commands: The commands that should get their own subparser. Highly recommended for all commands.

    Returns:
        The argument parser with subparsers attached.
    """
    # We need to set these shared options on the main parser, but also all subparsers.
    default_options = {
        "conflict_handler": "resolve",
        "allow_abbrev": False,
        "add_help": False,
        "exit_on_error": False,
    }

    argument_parser = _ArgumentParser(prog="btbd", **default_options)  # type: ignore[arg-type]
    subparsers = argument_parser.add_subparsers(dest="command_name")

    for command in commands:
        command_parser = subparsers.add_parser(command.name, **default_options)
        command.setup_parser(command_parser)

    return argument_parser


def run_console_application(argv: Optional[list[str]] = None) -> int:
    """Runs btbd as console application. Used as entry point for console scripts.

    Args:
        argv: The arguments after the program name, `sys.argv[1:]` by default.

    Returns:
        The exit code: 0 on success, 1 for usage errors and 2 for data errors.
    """
    if not version.has_matching_versions():
        messages.warning("Your btbd config file version does not match your actual btbd version.")

    arguments = sys.argv[1:] if argv is None else argv
    if not arguments:
        arguments = ["help"]

    try:
        parser = _create_argument_parser([command for (name, command) in command_manager])
        try:
            parsed_arguments = parser.parse_args(arguments)
        except argparse.ArgumentError as error:
            raise UsageError(str(error)) from error

        command_manager.execute(parsed_arguments.command_name, parsed_arguments)
    except BtbdException as error:
        messages.error(str(error))
        messages.debug(repr(error))
        return error.exit_code
    except OSError as error:
        messages.error(f"{error.strerror or error}: {error.filename}" if error.filename else str(error))
        return DATA_ERROR_EXIT_CODE
    except Exception as error:  # pylint: disable=broad-except
        messages.error(f"Something went wrong, please check the logs for more info: {repr(error)}", error)
        return DATA_ERROR_EXIT_CODE

    return 0
