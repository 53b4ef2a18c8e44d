import argparse
from dataclasses import dataclass

from btbd.ddl.commands import CommandInterface, CommandManagerInterface
from btbd.core.exceptions import DuplicateCommandError, UnknownCommandError


@dataclass
class CommandManager(CommandManagerInterface):
    """Manages the registered commands, and executes commands when requested."""

    def register(self, command: CommandInterface) -> bool:
        """Register a command to the command manager.

        Args:
            command: The command object to register.

        Raises:
            DuplicateCommandError: A command with the same name is already registered.

        Returns:
            bool: Whether the registration succeeded.
        """
        if command.name.lower() in self.registered_commands:
            raise DuplicateCommandError(f"a command named '{command.name}' is already registered")

        self.registered_commands[command.name.lower()] = command
        return True

    def execute(self, command_name: str, args: argparse.Namespace) -> None:
        """Executes a command, based on the string name.

        Args:
            command_name: The name of the command to execute.
            args: The parsed arguments for the command.

        Raises:
            UnknownCommandError: No command with this name is registered.
        """
        if command_name not in self.registered_commands:
            raise UnknownCommandError

        self.registered_commands[command_name].run(args)
