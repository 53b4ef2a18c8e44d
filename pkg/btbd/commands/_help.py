from dataclasses import dataclass
import argparse

from btbd.utils import version
from btbd.ddl.commands import CommandInterface, CommandManagerInterface
from btbd.core.exceptions import UnknownCommandError
from btbd.core import messages


@dataclass(kw_only=True)
class Help(CommandInterface):
    """Built-in 'help' command."""

    command_manager: CommandManagerInterface
    name: str = "help"
    help: str = "Shows this help prompt."

    def run(self, args: argparse.Namespace) -> None:
        """Shows help prompt for all commands or a single command, if specified.

        Args:
            args: The arguments provided by the caller.
        """
        if getattr(args, "command", None) is None:
            table = [[name, command.help] for (name, command) in self.command_manager]
            messages.info(f"\nShowing help for all {len(self.command_manager)} btbd commands:\n")
            messages.table(table)
            messages.info(f"\nbtbd v{version.DISTRIBUTION_VERSION}")
            return

        if args.command not in self.command_manager:
            raise UnknownCommandError(f"Could not find help for '{args.command}'. Are you sure it exists?")

        command = self.command_manager.registered_commands[args.command]
        messages.info(f"\nShowing help for {args.command}:\n")
        messages.echo(command.run.__doc__ or command.help)
        flags = command.describe_flags()
        if flags:
            messages.table(flags)
        messages.info(f"\nbtbd v{version.DISTRIBUTION_VERSION}")

    def setup_parser(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--command",
            default=None,
            help="The command you wish to see the help text for, leave blank for an overview of all commands.",
        )
